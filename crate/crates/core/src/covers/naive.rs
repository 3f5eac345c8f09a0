//! Brute-force enumeration of pillowcase monodromy quadruples in small
//! symmetric groups; ground truth for the character-theoretic counts.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use super::partition::Partition;
use crate::arith::{factorial, int_rat, rat, BigRational};
use crate::error::{Error, Result};

/// Largest degree the enumerator accepts.
pub const NAIVE_MAX_DEGREE: u32 = 5;

type Perm = Vec<u8>;

fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn inverse(a: &[u8]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}

fn transitive(gens: &[&[u8]]) -> bool {
    let n = gens[0].len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x] as usize;
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn check_degree(n: u32) -> Result<()> {
    if n > NAIVE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            max: NAIVE_MAX_DEGREE,
            got: n,
        });
    }
    Ok(())
}

fn elements_with_type(n: u32, class: &Partition) -> Vec<Perm> {
    (0..n as u8)
        .permutations(n as usize)
        .filter(|p| cycle_type(p) == *class)
        .collect()
}

/// Weighted counts for fixed corner classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveCount {
    /// Quadruples with product one, divided by `N!`.
    pub all: BigRational,
    /// Transitive quadruples only, divided by `N!`.
    pub connected: BigRational,
}

/// Enumerates `g_i in C_i` with `g1 g2 g3 g4 = 1` directly.
pub fn naive_counts(classes: &[Partition; 4]) -> Result<NaiveCount> {
    let n = classes[0].size();
    if classes.iter().any(|c| c.size() != n) {
        return Err(Error::Invalid(
            "corner classes have different degrees".into(),
        ));
    }
    check_degree(n)?;
    if n == 0 {
        return Ok(NaiveCount {
            all: rat(0),
            connected: rat(0),
        });
    }
    let sets: Vec<Vec<Perm>> = classes[..3]
        .iter()
        .map(|c| elements_with_type(n, c))
        .collect();
    let (mut all, mut connected) = (0u64, 0u64);
    for g1 in &sets[0] {
        for g2 in &sets[1] {
            let g12 = compose(g1, g2);
            for g3 in &sets[2] {
                let g4 = inverse(&compose(&g12, g3));
                if cycle_type(&g4) != classes[3] {
                    continue;
                }
                all += 1;
                if transitive(&[g1, g2, g3]) {
                    connected += 1;
                }
            }
        }
    }
    let nf = int_rat(factorial(u64::from(n)));
    Ok(NaiveCount {
        all: rat(all as i64) / &nf,
        connected: rat(connected as i64) / nf,
    })
}

/// Weighted number of connected covers with the given corner classes.
pub fn naive_enumerate(classes: &[Partition; 4]) -> Result<BigRational> {
    Ok(naive_counts(classes)?.connected)
}

/// All quadruples of degree `n` with corner cycle types in `{1, 2, 3}`,
/// graded by total numbers of 3-cycles and fixed points.
#[derive(Clone, Debug, Default)]
pub struct NaiveTable {
    pub all: BTreeMap<(u32, u32), BigRational>,
    pub connected: BTreeMap<(u32, u32), BigRational>,
    /// Transitive quadruples whose Euler characteristic, computed from
    /// orbit counts, disagrees with `(poles - zeros)/2`.
    pub euler_mismatches: usize,
    pub transitive_checked: usize,
}

/// Exhaustive graded table at degree `n <= 5`.
///
/// The cover inherits a cell structure from the pillowcase (4 vertices,
/// 4 edges, 2 faces): it has `2N` faces, `4N` edges and one vertex per
/// cycle of each `g_i`, so `χ = sum_i #cycles(g_i) - 2N`. With only 3-,
/// 2- and 1-cycles this must equal `(#1-cycles - #3-cycles)/2`.
pub fn naive_table(n: u32) -> Result<NaiveTable> {
    check_degree(n)?;
    let mut table = NaiveTable::default();
    if n == 0 {
        return Ok(table);
    }
    let small: Vec<(Perm, Partition)> = (0..n as u8)
        .permutations(n as usize)
        .map(|p| {
            let t = cycle_type(&p);
            (p, t)
        })
        .filter(|(_, t)| t.parts().iter().all(|&k| k <= 3))
        .collect();
    let mut all: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut connected: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (g1, t1) in &small {
        for (g2, t2) in &small {
            let g12 = compose(g1, g2);
            for (g3, t3) in &small {
                let g4 = inverse(&compose(&g12, g3));
                let t4 = cycle_type(&g4);
                if t4.parts().iter().any(|&k| k > 3) {
                    continue;
                }
                let types = [t1, t2, t3, &t4];
                let zeros: u32 = types.iter().map(|t| t.multiplicity(3)).sum();
                let poles: u32 = types.iter().map(|t| t.multiplicity(1)).sum();
                *all.entry((zeros, poles)).or_default() += 1;
                if transitive(&[g1, g2, g3]) {
                    *connected.entry((zeros, poles)).or_default() += 1;
                    table.transitive_checked += 1;
                    let vertices: i64 = types.iter().map(|t| t.len() as i64).sum();
                    let euler = vertices - 2 * i64::from(n);
                    if 2 * euler != i64::from(poles) - i64::from(zeros) {
                        table.euler_mismatches += 1;
                    }
                }
            }
        }
    }
    let nf = int_rat(factorial(u64::from(n)));
    let weigh = |m: BTreeMap<(u32, u32), u64>| {
        m.into_iter()
            .map(|(k, c)| (k, rat(c as i64) / &nf))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    };
    table.all = weigh(all);
    table.connected = weigh(connected);
    Ok(table)
}
