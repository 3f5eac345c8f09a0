//! Character-theoretic counts of pillowcase covers.
//!
//! A degree-`N` pillowcase cover is a quadruple `(g1, g2, g3, g4)` in `S_N`
//! with `g1 g2 g3 g4 = 1`, where `g_i` is the monodromy around corner `i`.
//! Counting quadruples with prescribed cycle types and dividing by `N!`
//! weights each cover by `1/|Aut|`; by the Frobenius formula this equals
//! `(1/N!^2) sum_λ f_λ^2 prod_i ω_λ(C_i)` with the central character
//! `ω_λ(C) = |C| χ_λ(C) / f_λ`.
//!
//! Only cycle types with parts in `{1, 2, 3}` occur. Grading by the total
//! number of 3-cycles (zeros) and fixed points (poles) turns the sum over
//! all corner assignments into a fourth power, and the connected count
//! is the logarithm of the resulting generating series in the degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::characters::CharacterTable;
use super::partition::Partition;
use crate::arith::{factorial, int_rat, rat, BigRational};
use crate::error::{Error, Result};
use crate::tree::expected_volume;

/// Polynomial in (zeros, poles) truncated at fixed maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigraded {
    zeros_max: u32,
    poles_max: u32,
    coeffs: Vec<BigRational>,
}

impl Bigraded {
    pub fn zero(zeros_max: u32, poles_max: u32) -> Self {
        let len = ((zeros_max + 1) * (poles_max + 1)) as usize;
        Bigraded {
            zeros_max,
            poles_max,
            coeffs: vec![BigRational::zero(); len],
        }
    }

    fn index(&self, zeros: u32, poles: u32) -> Option<usize> {
        (zeros <= self.zeros_max && poles <= self.poles_max)
            .then(|| (zeros * (self.poles_max + 1) + poles) as usize)
    }

    /// Coefficient of `y^zeros z^poles` (zero outside the truncation).
    pub fn get(&self, zeros: u32, poles: u32) -> BigRational {
        self.index(zeros, poles)
            .map_or_else(BigRational::zero, |i| self.coeffs[i].clone())
    }

    /// Adds `c` at `(zeros, poles)`; terms beyond the truncation are dropped.
    pub fn add_at(&mut self, zeros: u32, poles: u32, c: &BigRational) {
        if let Some(i) = self.index(zeros, poles) {
            self.coeffs[i] += c;
        }
    }

    pub fn add(&self, other: &Bigraded) -> Bigraded {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Bigraded {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }

    pub fn mul(&self, other: &Bigraded) -> Bigraded {
        let mut out = Bigraded::zero(self.zeros_max, self.poles_max);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (za, pa) = self.coords(i);
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (zb, pb) = other.coords(j);
                out.add_at(za + zb, pa + pb, &(a * b));
            }
        }
        out
    }

    fn coords(&self, i: usize) -> (u32, u32) {
        let i = i as u32;
        (i / (self.poles_max + 1), i % (self.poles_max + 1))
    }

    /// Non-zero coefficients as `(zeros, poles, value)`.
    pub fn nonzero(&self) -> Vec<(u32, u32, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (z, p) = self.coords(i);
                (z, p, c.clone())
            })
            .collect()
    }
}

/// Cycle types of degree `n` with parts at most 3 whose numbers of 3-parts
/// and 1-parts fit under the truncation.
pub fn corner_classes(n: u32, zeros_max: u32, poles_max: u32) -> Vec<Partition> {
    Partition::bounded(n, 3)
        .into_iter()
        .filter(|c| c.multiplicity(3) <= zeros_max && c.multiplicity(1) <= poles_max)
        .collect()
}

/// `ω_λ(C) = |C| χ_λ(C) / f_λ`, always an integer.
fn central_character(
    table: &CharacterTable,
    irrep: &Partition,
    dim: &BigInt,
    class: &Partition,
) -> Result<BigInt> {
    let (q, r) = (class.class_size() * table.character(irrep, class)?).div_rem(dim);
    debug_assert!(r.is_zero(), "central character is integral");
    Ok(q)
}

/// Weighted number of quadruples `g_i in C_i` with `g1 g2 g3 g4 = 1`,
/// divided by `N!`; covers may be disconnected.
pub fn frobenius_count(classes: &[Partition; 4], table: &CharacterTable) -> Result<BigRational> {
    let n = classes[0].size();
    if let Some(c) = classes.iter().find(|c| c.size() != n) {
        return Err(Error::Invalid(format!(
            "corner classes have different degrees {n} and {}",
            c.size()
        )));
    }
    let total = Partition::all(n)
        .par_iter()
        .map(|irrep| -> Result<BigInt> {
            let f = irrep.dimension();
            let mut term = &f * &f;
            for c in classes {
                term *= central_character(table, irrep, &f, c)?;
            }
            Ok(term)
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    let nf = factorial(u64::from(n));
    Ok(BigRational::new(total, &nf * &nf))
}

/// Disconnected and connected weighted cover counts by degree, graded by
/// total zeros and poles.
#[derive(Clone, Debug)]
pub struct CoverTable {
    pub zeros_max: u32,
    pub poles_max: u32,
    /// `all[N]`, possibly disconnected; index 0 is the empty cover.
    pub all: Vec<Bigraded>,
    /// `connected[N]`; index 0 is zero.
    pub connected: Vec<Bigraded>,
}

impl CoverTable {
    pub fn max_degree(&self) -> u32 {
        self.all.len() as u32 - 1
    }

    pub fn connected_at(&self, degree: u32, zeros: u32, poles: u32) -> BigRational {
        self.connected
            .get(degree as usize)
            .map_or_else(BigRational::zero, |g| g.get(zeros, poles))
    }

    pub fn all_at(&self, degree: u32, zeros: u32, poles: u32) -> BigRational {
        self.all
            .get(degree as usize)
            .map_or_else(BigRational::zero, |g| g.get(zeros, poles))
    }
}

/// Sum over all corner assignments of the Frobenius count at degree `n`.
fn graded_degree(
    n: u32,
    zeros_max: u32,
    poles_max: u32,
    table: &CharacterTable,
) -> Result<Bigraded> {
    let classes = corner_classes(n, zeros_max, poles_max);
    let zero = Bigraded::zero(zeros_max, poles_max);
    if classes.is_empty() {
        return Ok(zero);
    }
    let sum = Partition::all(n)
        .par_iter()
        .map(|irrep| -> Result<Bigraded> {
            let f = irrep.dimension();
            let mut w = Bigraded::zero(zeros_max, poles_max);
            for c in &classes {
                let omega = central_character(table, irrep, &f, c)?;
                w.add_at(c.multiplicity(3), c.multiplicity(1), &int_rat(omega));
            }
            let w2 = w.mul(&w);
            Ok(w2.mul(&w2).scale(&int_rat(&f * &f)))
        })
        .try_reduce(|| zero.clone(), |a, b| Ok(a.add(&b)))?;
    let nf = factorial(u64::from(n));
    Ok(sum.scale(&BigRational::new(1.into(), &nf * &nf)))
}

/// Graded counts for degrees up to `max_degree`, truncated at `K` zeros
/// and `K + 4` poles, with connected parts extracted by
/// `C_N = Z_N - (1/N) sum_{j<N} j C_j Z_{N-j}`.
pub fn connected_counts(
    k_zeros: u32,
    max_degree: u32,
    table: &CharacterTable,
) -> Result<CoverTable> {
    let (zmax, pmax) = (k_zeros, k_zeros + 4);
    let mut one = Bigraded::zero(zmax, pmax);
    one.add_at(0, 0, &rat(1));
    let mut all = vec![one];
    for n in 1..=max_degree {
        all.push(graded_degree(n, zmax, pmax, table)?);
    }
    let mut connected = vec![Bigraded::zero(zmax, pmax)];
    for n in 1..=max_degree as usize {
        let mut acc = Bigraded::zero(zmax, pmax);
        for j in 1..n {
            acc = acc.add(&connected[j].mul(&all[n - j]).scale(&rat(j as i64)));
        }
        let c = all[n].add(&acc.scale(&BigRational::new((-1).into(), n.into())));
        connected.push(c);
    }
    Ok(CoverTable {
        zeros_max: zmax,
        poles_max: pmax,
        all,
        connected,
    })
}

/// Half-period translations of the pillowcase. They permute the corners
/// and act freely on generic covers with labelled corners; covers in one
/// orbit are the same square-tiled surface.
pub const PILLOWCASE_TRANSLATIONS: u32 = 4;

/// `K! (K+4)! sum_{N <= N_max}` connected weighted counts with exactly `K`
/// zeros and `K + 4` poles: covers of the pillowcase with labelled corners
/// and numbered singularities.
pub fn labelled_cover_count(
    k_zeros: u32,
    max_degree: u32,
    table: &CharacterTable,
) -> Result<BigRational> {
    let covers = connected_counts(k_zeros, max_degree, table)?;
    Ok(labelled_cover_count_from(&covers, k_zeros, max_degree))
}

/// Like [`labelled_cover_count`] but reusing a table computed for at least
/// `max_degree`.
pub fn labelled_cover_count_from(
    covers: &CoverTable,
    k_zeros: u32,
    max_degree: u32,
) -> BigRational {
    let labels = int_rat(factorial(u64::from(k_zeros)) * factorial(u64::from(k_zeros) + 4));
    let total: BigRational = (1..=max_degree)
        .map(|n| covers.connected_at(n, k_zeros, k_zeros + 4))
        .sum();
    total * labels
}

/// Square-tiled surfaces in `Q(1^K, -1^{K+4})` with at most `N_max` black
/// and `N_max` white squares: labelled-corner covers divided by the four
/// pillowcase translations.
pub fn sq_count(k_zeros: u32, max_degree: u32, table: &CharacterTable) -> Result<BigRational> {
    let covers = connected_counts(k_zeros, max_degree, table)?;
    Ok(sq_count_from(&covers, k_zeros, max_degree))
}

/// Like [`sq_count`] but reusing a table computed for at least `max_degree`.
pub fn sq_count_from(covers: &CoverTable, k_zeros: u32, max_degree: u32) -> BigRational {
    labelled_cover_count_from(covers, k_zeros, max_degree) / rat(i64::from(PILLOWCASE_TRANSLATIONS))
}

/// `2d Sq_N / (Vol N^d)` with `d = 2K + 2`, which tends to 1; for `K = 1`
/// this is `8 Sq_N / (π^4 N^4)`.
pub fn growth_ratio(k_zeros: u32, degree: u32, sq: &BigRational) -> f64 {
    let d = 2 * k_zeros + 2;
    let vol = expected_volume(k_zeros);
    let scaled =
        sq * rat(i64::from(2 * d)) / (vol.coefficient() * int_rat(BigInt::from(degree).pow(d)));
    scaled.to_f64().unwrap_or(f64::NAN) / std::f64::consts::PI.powi(vol.pi_power() as i32)
}

/// Growth ratios at each requested degree, sharing one character pass.
pub fn growth_ratios(
    k_zeros: u32,
    degrees: &[u32],
    table: &CharacterTable,
) -> Result<Vec<(u32, BigRational, f64)>> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    let covers = connected_counts(k_zeros, top, table)?;
    Ok(degrees
        .iter()
        .map(|&n| {
            let sq = sq_count_from(&covers, k_zeros, n);
            let r = growth_ratio(k_zeros, n, &sq);
            (n, sq, r)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn frobenius_examples() {
        let t = CharacterTable::in_memory();
        assert_eq!(
            frobenius_count(&[p(&[1]), p(&[1]), p(&[1]), p(&[1])], &t).unwrap(),
            rat(1)
        );
        assert_eq!(
            frobenius_count(&[p(&[3]), p(&[2, 1]), p(&[2, 1]), p(&[1, 1, 1])], &t).unwrap(),
            rat(1)
        );
        // In S_2: g1 = g2 = (12), g3 = g4 = id; one quadruple over 2!.
        assert_eq!(
            frobenius_count(&[p(&[2]), p(&[2]), p(&[1, 1]), p(&[1, 1])], &t).unwrap(),
            ratio(1, 2)
        );
        assert!(frobenius_count(&[p(&[2]), p(&[1]), p(&[1]), p(&[1])], &t).is_err());
    }

    #[test]
    fn connected_examples() {
        let t = CharacterTable::in_memory();
        let table = connected_counts(1, 4, &t).unwrap();
        assert_eq!(table.connected_at(3, 1, 5), rat(12));
        assert_eq!(table.connected_at(1, 1, 5), rat(0));
        assert_eq!(table.connected_at(2, 1, 5), rat(0));
        // 4N - 3K - (K+4) odd: no cover.
        let table2 = connected_counts(2, 4, &t).unwrap();
        assert_eq!(table2.connected_at(3, 1, 4), rat(0));
    }

    #[test]
    fn sq_count_examples() {
        let t = CharacterTable::in_memory();
        assert_eq!(sq_count(1, 2, &t).unwrap(), rat(0));
        assert_eq!(labelled_cover_count(1, 3, &t).unwrap(), rat(1440));
        assert_eq!(sq_count(1, 3, &t).unwrap(), rat(360));
    }

    #[test]
    fn bigraded_truncates() {
        let mut a = Bigraded::zero(1, 1);
        a.add_at(1, 0, &rat(2));
        a.add_at(0, 1, &rat(3));
        let sq = a.mul(&a);
        assert_eq!(sq.get(1, 1), rat(12));
        assert_eq!(sq.get(2, 0), rat(0));
        assert_eq!(sq.nonzero(), vec![(1, 1, rat(12))]);
    }
}
