//! Exact rational arithmetic, Bernoulli numbers and zeta values at even
//! integers, kept as rational multiples of powers of pi.

use std::fmt;
use std::ops::Mul;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`, reduced.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn factorial_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

/// `n!`, memoized process-wide.
pub fn factorial(n: u64) -> BigInt {
    let n = n as usize;
    {
        let table = factorial_table().read().expect("factorial cache poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().expect("factorial cache poisoned");
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `top! / (parts[0]! * parts[1]! * ...)`.
pub fn multinomial(top: u64, parts: &[u64]) -> Result<BigInt> {
    let sum: u64 = parts.iter().sum();
    if sum != top {
        return Err(Error::MultinomialMismatch { top, sum });
    }
    let denom = parts
        .iter()
        .fold(BigInt::one(), |acc, &p| acc * factorial(p));
    Ok(factorial(top) / denom)
}

/// All vectors of `parts` nonnegative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn bernoulli_table() -> &'static RwLock<Vec<BigRational>> {
    static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Uses `sum_{j=0}^{n} C(n+1, j) B_j = 0`; values are memoized.
pub fn bernoulli(n: u32) -> BigRational {
    let n = n as usize;
    {
        let table = bernoulli_table().read().expect("bernoulli cache poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = bernoulli_table().write().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let k = table.len() as u64;
        let acc = table
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (j, b)| {
                acc + b * int_rat(binomial(k + 1, j as u64))
            });
        let next = -acc / rat(k as i64 + 1);
        table.push(next);
    }
    table[n].clone()
}

/// A rational multiple of an even power of pi.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiValue {
    coefficient: BigRational,
    pi_power: u32,
}

impl PiValue {
    pub fn new(coefficient: BigRational, pi_power: u32) -> Result<Self> {
        if !pi_power.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "pi power must be even, got {pi_power}"
            )));
        }
        Ok(Self {
            coefficient,
            pi_power,
        })
    }

    pub fn zero(pi_power: u32) -> Self {
        Self {
            coefficient: BigRational::zero(),
            pi_power: pi_power & !1,
        }
    }

    pub fn one() -> Self {
        Self {
            coefficient: BigRational::one(),
            pi_power: 0,
        }
    }

    pub fn rational(coefficient: BigRational) -> Self {
        Self {
            coefficient,
            pi_power: 0,
        }
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.coefficient
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn checked_add(&self, other: &PiValue) -> Result<PiValue> {
        if self.pi_power != other.pi_power {
            return Err(Error::MixedPiPower {
                left: self.pi_power,
                right: other.pi_power,
            });
        }
        Ok(PiValue {
            coefficient: &self.coefficient + &other.coefficient,
            pi_power: self.pi_power,
        })
    }

    pub fn scale(&self, factor: &BigRational) -> PiValue {
        PiValue {
            coefficient: &self.coefficient * factor,
            pi_power: self.pi_power,
        }
    }

    /// Floating point approximation, for display only.
    pub fn approx(&self) -> f64 {
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        c * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    pub fn to_latex(&self) -> String {
        let num = self.coefficient.numer();
        let den = self.coefficient.denom();
        let sign = if num.is_negative() { "-" } else { "" };
        let body = if den.is_one() {
            if num.abs().is_one() && self.pi_power > 0 {
                String::new()
            } else {
                num.abs().to_string()
            }
        } else {
            format!("\\frac{{{}}}{{{}}}", num.abs(), den)
        };
        match self.pi_power {
            0 => format!("{sign}{}", if body.is_empty() { "1".into() } else { body }),
            p => format!("{sign}{body}\\pi^{{{p}}}"),
        }
    }

    /// Sum a sequence of values that all share `pi_power`.
    pub fn sum<'a, I>(pi_power: u32, values: I) -> Result<PiValue>
    where
        I: IntoIterator<Item = &'a PiValue>,
    {
        values
            .into_iter()
            .try_fold(PiValue::zero(pi_power), |acc, v| acc.checked_add(v))
    }
}

impl Mul for &PiValue {
    type Output = PiValue;

    fn mul(self, rhs: &PiValue) -> PiValue {
        PiValue {
            coefficient: &self.coefficient * &rhs.coefficient,
            pi_power: self.pi_power + rhs.pi_power,
        }
    }
}

impl Mul for PiValue {
    type Output = PiValue;

    fn mul(self, rhs: PiValue) -> PiValue {
        &self * &rhs
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pi^{} * {}/{}",
            self.pi_power,
            self.coefficient.numer(),
            self.coefficient.denom()
        )
    }
}

/// `zeta(s)` for even `s >= 2`, as `(-1)^(s/2+1) B_s (2 pi)^s / (2 s!)`.
pub fn zeta_even(s: i64) -> Result<PiValue> {
    if s < 2 || s % 2 != 0 {
        return Err(Error::UnsupportedZeta(s));
    }
    let half = s / 2;
    let sign = if half % 2 == 1 { rat(1) } else { rat(-1) };
    let two_pow = int_rat(BigInt::one() << (s as usize - 1));
    let coefficient = sign * bernoulli(s as u32) * two_pow / int_rat(factorial(s as u64));
    Ok(PiValue {
        coefficient,
        pi_power: s as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for n in 1..30 {
            assert!(bernoulli(2 * n + 1).is_zero(), "B_{}", 2 * n + 1);
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_even(2).unwrap(), PiValue::new(ratio(1, 6), 2).unwrap());
        assert_eq!(
            zeta_even(4).unwrap(),
            PiValue::new(ratio(1, 90), 4).unwrap()
        );
        assert_eq!(
            zeta_even(6).unwrap(),
            PiValue::new(ratio(1, 945), 6).unwrap()
        );
        // 40 zeta(4) = 4/9 pi^4
        assert_eq!(
            zeta_even(4).unwrap().scale(&rat(40)).coefficient(),
            &ratio(4, 9)
        );
    }

    #[test]
    fn zeta_rejects_odd_and_nonpositive() {
        for s in [-2, 0, 1, 3, 7] {
            assert!(matches!(zeta_even(s), Err(Error::UnsupportedZeta(_))));
        }
    }

    #[test]
    fn zeta_matches_partial_sums() {
        let pi = std::f64::consts::PI;
        for s in (2..=20).step_by(2) {
            let z = zeta_even(s).unwrap();
            let exact = z.coefficient().to_f64().unwrap() * pi.powi(s as i32);
            let partial: f64 = (1..=1_000_000u64)
                .rev()
                .map(|k| (k as f64).powi(-(s as i32)))
                .sum();
            let rel = ((exact - partial) / partial).abs();
            assert!(rel < 1e-6, "s = {s}: rel err {rel}");
        }
    }

    #[test]
    fn combinatorial_numbers() {
        assert_eq!(binomial(5, 3), BigInt::from(10));
        assert_eq!(multinomial(6, &[2, 2, 2]).unwrap(), BigInt::from(90));
        assert_eq!(multinomial(1, &[0, 1, 0]).unwrap(), BigInt::from(1));
        assert_eq!(multinomial(5, &[3, 2]).unwrap(), BigInt::from(10));
        assert!(matches!(
            multinomial(1, &[1, 0, 1]),
            Err(Error::MultinomialMismatch { top: 1, sum: 2 })
        ));
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(20), BigInt::from(2432902008176640000u64));
    }

    #[test]
    fn compositions_enumerate_all() {
        let c = compositions(2, 3);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![2, 0, 0]);
        assert!(c.iter().all(|v| v.iter().sum::<u32>() == 2));
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 0).is_empty());
    }

    #[test]
    fn pi_value_algebra() {
        let a = PiValue::new(ratio(1, 2), 2).unwrap();
        let b = PiValue::new(ratio(1, 3), 4).unwrap();
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::MixedPiPower { left: 2, right: 4 })
        ));
        assert_eq!((&a * &b).pi_power(), 6);
        assert_eq!(&a * &b, &b * &a);
        assert!(PiValue::new(rat(1), 3).is_err());
        assert_eq!(PiValue::new(rat(1), 4).unwrap().to_string(), "pi^4 * 1/1");
        assert_eq!(
            PiValue::new(ratio(4, 9), 4).unwrap().to_latex(),
            "\\frac{4}{9}\\pi^{4}"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pi_value() -> impl Strategy<Value = PiValue> {
            (-50i64..50, 1i64..20, 0u32..4)
                .prop_map(|(n, d, p)| PiValue::new(ratio(n, d), 2 * p).unwrap())
        }

        proptest! {
            #[test]
            fn mul_is_commutative_and_associative(a in pi_value(), b in pi_value(), c in pi_value()) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!((&a * &b).pi_power(), a.pi_power() + b.pi_power());
            }

            #[test]
            fn add_is_commutative_and_associative(n in proptest::collection::vec(-30i64..30, 3), p in 0u32..4) {
                let v: Vec<PiValue> = n.iter().map(|&k| PiValue::new(ratio(k, 7), 2 * p).unwrap()).collect();
                let ab = v[0].checked_add(&v[1]).unwrap();
                prop_assert_eq!(&ab, &v[1].checked_add(&v[0]).unwrap());
                let left = ab.checked_add(&v[2]).unwrap();
                let right = v[0].checked_add(&v[1].checked_add(&v[2]).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }
}
