//! Local polynomials `F_{m,n}`: leading-order counts of half-integer metric
//! ribbon graphs with `m` trivalent and `n` univalent labelled vertices
//! realizing prescribed integer face widths.
//!
//! Three independent routes are provided: the closed form, the Kontsevich
//! base case for `n = 0`, and the pole-adding recurrence
//! `F_{m+1,n+1} = 2(m+1) D(F_{m,n})`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{compositions, factorial, int_rat, multinomial, rat, BigRational};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// Numbers of zeros `m` and poles `n` on one singular layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerSignature {
    m: u32,
    n: u32,
}

impl LayerSignature {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 && n == 0 {
            return Err(Error::InvalidSignature {
                m,
                n,
                reason: "m and n cannot both vanish",
            });
        }
        if !(m + n).is_multiple_of(2) {
            return Err(Error::InvalidSignature {
                m,
                n,
                reason: "m - n must be even",
            });
        }
        if m + 2 < n {
            return Err(Error::InvalidSignature {
                m,
                n,
                reason: "m - n must be at least -2",
            });
        }
        Ok(LayerSignature { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of faces (adjacent cylinders), `(m - n)/2 + 2`.
    pub fn faces(&self) -> usize {
        ((self.m + 4 - self.n) / 2) as usize
    }

    /// Half-degree `a = (m + n)/2 - 1`.
    pub fn half_degree(&self) -> u32 {
        (self.m + self.n) / 2 - 1
    }

    /// Number of edges `(3m + n)/2` of any ribbon graph with this signature.
    pub fn edges(&self) -> usize {
        ((3 * self.m + self.n) / 2) as usize
    }

    /// Recovers `(m, n)` from the half-degree `a` and valence `l`.
    pub fn from_degree_valence(a: u32, l: u32) -> Result<Self> {
        let m = (a + l)
            .checked_sub(1)
            .ok_or_else(|| Error::Invalid("valence 0 with a = 0".into()))?;
        let n = (a + 3)
            .checked_sub(l)
            .ok_or_else(|| Error::Invalid(format!("a = {a} below valence {l} - 3")))?;
        LayerSignature::new(m, n)
    }

    /// All valid signatures with `m + n <= bound`.
    pub fn all_up_to(bound: u32) -> Vec<LayerSignature> {
        let mut out = Vec::new();
        for total in 1..=bound {
            for m in 0..=total {
                if let Ok(sig) = LayerSignature::new(m, total - m) {
                    out.push(sig);
                }
            }
        }
        out
    }
}

impl fmt::Display for LayerSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Closed form: coefficient of `prod w_i^{2 b_i}` is `m!/a! * multinomial(a; b)^2`.
pub fn f_closed(sig: LayerSignature) -> Polynomial {
    let l = sig.faces();
    let a = sig.half_degree();
    let lead = int_rat(factorial(u64::from(sig.m))) / int_rat(factorial(u64::from(a)));
    let mut p = Polynomial::zero(l);
    for b in compositions(a, l) {
        let parts: Vec<u64> = b.iter().map(|&x| u64::from(x)).collect();
        let mult = multinomial(u64::from(a), &parts).expect("composition sums to a");
        let coeff = &lead * int_rat(&mult * &mult);
        let exps = b.iter().map(|&x| 2 * x).collect();
        p.add_term(Monomial::new(exps), coeff);
    }
    p
}

/// `F_{m,0} = m! sum_{k_i, sum = k-1} multinomial(k-1; k_i) prod w_i^{2k_i}/k_i!`
/// with `k = m/2` and `k + 2` variables.
pub fn f_kontsevich_base(m: u32) -> Result<Polynomial> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::OddKontsevich(m));
    }
    let k = m / 2;
    let l = (k + 2) as usize;
    let mfact = int_rat(factorial(u64::from(m)));
    let mut p = Polynomial::zero(l);
    for ks in compositions(k - 1, l) {
        let parts: Vec<u64> = ks.iter().map(|&x| u64::from(x)).collect();
        let mult = int_rat(multinomial(u64::from(k - 1), &parts).expect("sums to k-1"));
        let denom = parts
            .iter()
            .fold(BigRational::from_integer(1.into()), |acc, &x| {
                acc * int_rat(factorial(x))
            });
        let exps = ks.iter().map(|&x| 2 * x).collect();
        p.add_term(Monomial::new(exps), &mfact * mult / denom);
    }
    Ok(p)
}

/// One application of `F_{m+1,n+1} = 2(m+1) D(F_{m,n})`, where `m` is the
/// zero count of the input.
pub fn pole_step(f: &Polynomial, m: u32, faces: usize) -> Polynomial {
    let vars: Vec<usize> = (0..faces).collect();
    f.apply_d(&vars).scale(&rat(2 * (i64::from(m) + 1)))
}

/// `F_{m,n}` by repeatedly adding a pole to a base case: `F_{m-n,0}` when
/// `m > n`, `F_{1,1} = 1` when `m = n`, `F_{0,2} = 1` when `m = n - 2`.
pub fn f_recurrence(sig: LayerSignature) -> Polynomial {
    let l = sig.faces();
    let (mut m, mut f) = if sig.m > sig.n {
        let base = sig.m - sig.n;
        (
            base,
            f_kontsevich_base(base).expect("m - n is even and positive"),
        )
    } else if sig.m == sig.n {
        (1, Polynomial::one(2))
    } else {
        (0, Polynomial::one(1))
    };
    while m < sig.m {
        f = pole_step(&f, m, l);
        m += 1;
    }
    f
}

/// The `m = n` and `m = n - 2` closed forms:
/// `m sum_i C(m-1, i)^2 w_1^{2i} w_2^{2(m-1-i)}` and `w^{2m}`.
pub fn f_special_diagonal(sig: LayerSignature) -> Result<Polynomial> {
    let m = sig.m;
    if sig.m == sig.n {
        let mut p = Polynomial::zero(2);
        for i in 0..m {
            let c = crate::arith::binomial(u64::from(m - 1), u64::from(i));
            p.add_term(
                Monomial::new(vec![2 * i, 2 * (m - 1 - i)]),
                rat(i64::from(m)) * int_rat(&c * &c),
            );
        }
        Ok(p)
    } else if sig.m + 2 == sig.n {
        Ok(Polynomial::from_terms(
            1,
            [(Monomial::var(0, 2 * m), rat(1))],
        ))
    } else {
        Err(Error::InvalidSignature {
            m: sig.m,
            n: sig.n,
            reason: "special forms need m = n or m = n - 2",
        })
    }
}

/// Method selector for [`local_polynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Recurrence,
}

fn memo() -> &'static RwLock<HashMap<LayerSignature, Polynomial>> {
    static MEMO: OnceLock<RwLock<HashMap<LayerSignature, Polynomial>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Memoized closed-form `F_{m,n}`.
pub fn local_polynomial(sig: LayerSignature) -> Polynomial {
    if let Some(p) = memo().read().expect("memo poisoned").get(&sig) {
        return p.clone();
    }
    let p = f_closed(sig);
    memo()
        .write()
        .expect("memo poisoned")
        .entry(sig)
        .or_insert(p)
        .clone()
}

pub fn local_polynomial_by(sig: LayerSignature, method: Method) -> Polynomial {
    match method {
        Method::Closed => local_polynomial(sig),
        Method::Recurrence => f_recurrence(sig),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(m: u32, n: u32) -> LayerSignature {
        LayerSignature::new(m, n).unwrap()
    }

    fn p(arity: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_int_terms(arity, terms)
    }

    #[test]
    fn signature_validation() {
        assert!(LayerSignature::new(0, 0).is_err());
        assert!(LayerSignature::new(1, 2).is_err());
        assert!(LayerSignature::new(0, 4).is_err());
        let s = sig(3, 1);
        assert_eq!((s.faces(), s.half_degree(), s.edges()), (3, 1, 5));
        assert_eq!(sig(0, 2).faces(), 1);
        assert_eq!(
            LayerSignature::from_degree_valence(1, 1).unwrap(),
            sig(1, 3)
        );
        assert_eq!(
            LayerSignature::from_degree_valence(0, 3).unwrap(),
            sig(2, 0)
        );
        assert!(LayerSignature::from_degree_valence(0, 4).is_err());
    }

    #[test]
    fn closed_form_table_entries() {
        assert_eq!(f_closed(sig(0, 2)), Polynomial::one(1));
        assert_eq!(f_closed(sig(1, 3)), p(1, &[(&[2], 1)]));
        assert_eq!(f_closed(sig(2, 4)), p(1, &[(&[4], 1)]));
        assert_eq!(f_closed(sig(3, 5)), p(1, &[(&[6], 1)]));
        assert_eq!(f_closed(sig(1, 1)), Polynomial::one(2));
        assert_eq!(f_closed(sig(2, 2)), p(2, &[(&[2, 0], 2), (&[0, 2], 2)]));
        assert_eq!(
            f_closed(sig(3, 3)),
            p(2, &[(&[4, 0], 3), (&[2, 2], 12), (&[0, 4], 3)])
        );
        assert_eq!(f_closed(sig(2, 0)), Polynomial::constant(rat(2), 3));
        assert_eq!(
            f_closed(sig(3, 1)),
            p(3, &[(&[2, 0, 0], 6), (&[0, 2, 0], 6), (&[0, 0, 2], 6)])
        );
    }

    #[test]
    fn kontsevich_base_examples() {
        assert_eq!(
            f_kontsevich_base(2).unwrap(),
            Polynomial::constant(rat(2), 3)
        );
        assert_eq!(
            f_kontsevich_base(4).unwrap(),
            p(
                4,
                &[
                    (&[2], 24),
                    (&[0, 2], 24),
                    (&[0, 0, 2], 24),
                    (&[0, 0, 0, 2], 24)
                ]
            )
        );
        assert_eq!(f_kontsevich_base(2).unwrap(), f_closed(sig(2, 0)));
        assert!(matches!(f_kontsevich_base(3), Err(Error::OddKontsevich(3))));
        assert!(f_kontsevich_base(0).is_err());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(f_recurrence(sig(1, 1)), Polynomial::one(2));
        assert_eq!(f_recurrence(sig(1, 3)), p(1, &[(&[2], 1)]));
        assert_eq!(f_recurrence(sig(3, 5)), p(1, &[(&[6], 1)]));
    }

    #[test]
    fn special_diagonal_examples() {
        assert_eq!(
            f_special_diagonal(sig(2, 2)).unwrap(),
            p(2, &[(&[2, 0], 2), (&[0, 2], 2)])
        );
        assert_eq!(
            f_special_diagonal(sig(3, 3)).unwrap(),
            p(2, &[(&[4, 0], 3), (&[2, 2], 12), (&[0, 4], 3)])
        );
        assert_eq!(f_special_diagonal(sig(1, 3)).unwrap(), p(1, &[(&[2], 1)]));
        assert!(f_special_diagonal(sig(3, 1)).is_err());
    }

    #[test]
    fn routes_agree_up_to_twelve() {
        for s in LayerSignature::all_up_to(12) {
            let closed = f_closed(s);
            assert_eq!(closed, f_recurrence(s), "{s}");
            if let Ok(special) = f_special_diagonal(s) {
                assert_eq!(closed, special, "{s}");
            }
        }
    }

    #[test]
    fn structural_invariants() {
        for s in LayerSignature::all_up_to(12) {
            let f = f_closed(s);
            assert_eq!(f.arity(), s.faces(), "{s}");
            assert!(f.is_symmetric(s.faces()), "{s}");
            assert_eq!(f.homogeneous_degree(), Some(s.m() + s.n() - 2), "{s}");
            assert_eq!(f.homogeneous_degree(), Some(2 * s.half_degree()), "{s}");
            assert!(f.terms().all(|(_, c)| c > &rat(0)), "{s}");
        }
    }
}
