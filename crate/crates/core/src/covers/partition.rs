//! Integer partitions used as irreducible representations and conjugacy
//! classes of symmetric groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::factorial;
use crate::error::{Error, Result};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` descending and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `3^{threes} 2^{twos} 1^{ones}`.
    pub fn from_multiplicities(threes: u32, twos: u32, ones: u32) -> Self {
        let mut parts = vec![3; threes as usize];
        parts.extend(std::iter::repeat_n(2, twos as usize));
        parts.extend(std::iter::repeat_n(1, ones as usize));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// Order of the centralizer of an element of this cycle type,
    /// `prod_k k^{a_k} a_k!`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let k = self.0[i];
            let run = self.0[i..].iter().take_while(|&&p| p == k).count();
            z *= BigInt::from(k).pow(run as u32) * factorial(run as u64);
            i += run;
        }
        z
    }

    /// Size of the conjugacy class `N!/z`.
    pub fn class_size(&self) -> BigInt {
        factorial(u64::from(self.size())) / self.centralizer_order()
    }

    /// Dimension of the irreducible representation, by the hook length
    /// formula.
    pub fn dimension(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row as usize - j - 1;
                let leg = conj.0[j] as usize - i - 1;
                hooks *= BigInt::from(arm + leg + 1);
            }
        }
        factorial(u64::from(self.size())) / hooks
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        Partition::bounded(n, n)
    }

    /// Partitions of `n` with every part at most `max_part`.
    pub fn bounded(n: u32, max_part: u32) -> Vec<Partition> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, max_part, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated parts, e.g. `3,2,1`; the empty string is the
    /// empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::default());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| Error::Invalid(format!("bad partition part {p:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Partition::new(parts))
    }
}
