//! Sparse multivariate polynomials with rational coefficients, and
//! unreduced rational functions built from them.
//!
//! Variables are positional: index `i` stands for `w_{i+1}` in width space
//! and for `λ_{i+1}` in Laplace space.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorial, int_rat, rat, BigRational};
use crate::error::{Error, Result};

/// Exponent vector. Trailing zeros are trimmed so that comparison of
/// monomials behaves like comparison of zero-padded vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        Monomial(exponents)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `w_var^power`.
    pub fn var(var: usize, power: u32) -> Self {
        let mut e = vec![0; var + 1];
        e[var] = power;
        Monomial::new(e)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponents padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<u32> {
        let mut e = self.0.clone();
        if e.len() < len {
            e.resize(len, 0);
        }
        e
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of variables actually present (index of the last nonzero + 1).
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let e = (0..len)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial::new(e)
    }

    fn with_exponent(&self, var: usize, power: u32) -> Monomial {
        let mut e = self.padded(var + 1);
        e[var] = power;
        Monomial::new(e)
    }

    /// Moves the exponent of variable `i` to variable `map[i]`.
    pub fn rename(&self, map: &[usize]) -> Monomial {
        let len = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut e = vec![0; len.max(self.0.len())];
        for (i, &p) in self.0.iter().enumerate() {
            if p > 0 {
                e[map[i]] += p;
            }
        }
        Monomial::new(e)
    }
}

/// Sparse polynomial over the rationals. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational, arity: usize) -> Self {
        Polynomial::from_terms(arity, [(Monomial::one(), c)])
    }

    pub fn one(arity: usize) -> Self {
        Polynomial::constant(BigRational::one(), arity)
    }

    /// The single variable `w_var` inside an `arity`-variable ring.
    pub fn var(var: usize, arity: usize) -> Self {
        Polynomial::from_terms(
            arity.max(var + 1),
            [(Monomial::var(var, 1), BigRational::one())],
        )
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(arity: usize, terms: &[(&[u32], i64)]) -> Self {
        Polynomial::from_terms(
            arity,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.to_vec()), rat(*c))),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        self.arity = self.arity.max(m.support_len());
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Number of variables this polynomial is considered over.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn with_arity(mut self, arity: usize) -> Self {
        self.arity = self.arity.max(arity);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone().with_arity(other.arity);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &BigRational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity.max(other.arity));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::one(self.arity), |acc, _| acc.mul(self))
    }

    /// Exact evaluation; `point` must cover every variable of the ring.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() < self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in m.exponents().iter().enumerate() {
                for _ in 0..p {
                    term *= &point[i];
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// `sum_{v in vars} D_v(p)` where `D_w(w^n) = w^(n+2)/(n+2)`.
    pub fn apply_d(&self, vars: &[usize]) -> Polynomial {
        let arity = vars.iter().map(|&v| v + 1).max().unwrap_or(0);
        let mut out = Polynomial::zero(self.arity.max(arity));
        for &v in vars {
            for (m, c) in &self.terms {
                let n = m.exponent(v);
                out.add_term(m.with_exponent(v, n + 2), c / rat(i64::from(n) + 2));
            }
        }
        out
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let n = m.exponent(var);
            if n > 0 {
                out.add_term(m.with_exponent(var, n - 1), c * rat(i64::from(n)));
            }
        }
        out
    }

    /// Relabels variables: `w_i` becomes `w_{map[i]}`.
    pub fn rename(&self, map: &[usize], arity: usize) -> Polynomial {
        Polynomial::from_terms(
            arity,
            self.terms.iter().map(|(m, c)| (m.rename(map), c.clone())),
        )
    }

    /// Applies a permutation of variables (`w_i -> w_{perm[i]}`).
    pub fn permute(&self, perm: &[usize]) -> Polynomial {
        self.rename(perm, self.arity.max(perm.len()))
    }

    /// Symmetric under every permutation of the first `l` variables.
    pub fn is_symmetric(&self, l: usize) -> bool {
        if l < 2 {
            return true;
        }
        (0..l - 1).all(|i| {
            let mut perm: Vec<usize> = (0..self.arity.max(l)).collect();
            perm.swap(i, i + 1);
            &self.permute(&perm) == self
        })
    }

    /// The unique total degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Terms of exactly total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Laplace transform in every variable of the ring: `w^k -> k!/λ^(k+1)`.
    pub fn laplace(&self) -> RationalFunction {
        let arity = self.arity;
        let mut max_exp = vec![0u32; arity];
        for m in self.terms.keys() {
            for (i, e) in max_exp.iter_mut().enumerate() {
                *e = (*e).max(m.exponent(i));
            }
        }
        let den_exp: Vec<u32> = max_exp.iter().map(|e| e + 1).collect();
        let mut num = Polynomial::zero(arity);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e = Vec::with_capacity(arity);
            for (i, &top) in max_exp.iter().enumerate() {
                let k = m.exponent(i);
                coeff *= int_rat(factorial(u64::from(k)));
                e.push(top - k);
            }
            num.add_term(Monomial::new(e), coeff);
        }
        let den = Polynomial::from_terms(arity, [(Monomial::new(den_exp), BigRational::one())]);
        RationalFunction {
            numerator: num,
            denominator: den,
        }
    }

    /// Canonical JSON rows, sorted by exponent vector in decreasing
    /// lexicographic order.
    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        let mut rows: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                exponents: m.padded(self.arity),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        rows.sort_by(|a, b| b.exponents.cmp(&a.exponents));
        rows
    }

    /// Human-readable rendering, e.g. `2*w1^2 + 2*w2^2`.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut rows: Vec<_> = self.terms.iter().collect();
        rows.sort_by_key(|r| std::cmp::Reverse(r.0.padded(self.arity)));
        let mut out = String::new();
        for (idx, (m, c)) in rows.into_iter().enumerate() {
            let negative = c < &BigRational::zero();
            if idx > 0 {
                out.push_str(if negative { " - " } else { " + " });
            } else if negative {
                out.push('-');
            }
            let abs = if negative { -c.clone() } else { c.clone() };
            let mut factors = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &p) in m.exponents().iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("{var}{}", i + 1)),
                    _ => factors.push(format!("{var}{}^{p}", i + 1)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("w"))
    }
}

/// One row of the canonical JSON polynomial encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonTerm {
    pub exponents: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// `numerator / denominator`, never reduced. Equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction {
            numerator,
            denominator,
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let arity = p.arity();
        RationalFunction {
            numerator: p,
            denominator: Polynomial::one(arity),
        }
    }

    pub fn zero(arity: usize) -> Self {
        RationalFunction::from_polynomial(Polynomial::zero(arity))
    }

    /// `c / λ_var`.
    pub fn inverse_var(var: usize, arity: usize) -> Self {
        RationalFunction {
            numerator: Polynomial::one(arity),
            denominator: Polynomial::var(var, arity),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.denominator == other.denominator {
            return RationalFunction {
                numerator: self.numerator.add(&other.numerator),
                denominator: self.denominator.clone(),
            };
        }
        RationalFunction {
            numerator: self
                .numerator
                .mul(&other.denominator)
                .add(&other.numerator.mul(&self.denominator)),
            denominator: self.denominator.mul(&other.denominator),
        }
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            numerator: self.numerator.neg(),
            denominator: self.denominator.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            numerator: self.numerator.mul(&other.numerator),
            denominator: self.denominator.mul(&other.denominator),
        }
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.numerator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction {
            numerator: self.numerator.mul(&other.denominator),
            denominator: self.denominator.mul(&other.numerator),
        })
    }

    pub fn scale(&self, factor: &BigRational) -> RationalFunction {
        RationalFunction {
            numerator: self.numerator.scale(factor),
            denominator: self.denominator.clone(),
        }
    }

    /// `∂f/∂λ_var` by the quotient rule.
    pub fn partial(&self, var: usize) -> RationalFunction {
        let num = self
            .numerator
            .partial(var)
            .mul(&self.denominator)
            .sub(&self.numerator.mul(&self.denominator.partial(var)));
        RationalFunction {
            numerator: num,
            denominator: self.denominator.mul(&self.denominator),
        }
    }

    /// `num1 * den2 == num2 * den1`.
    pub fn equals(&self, other: &RationalFunction) -> bool {
        self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        let den = self.denominator.evaluate(point)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.numerator.evaluate(point)? / den)
    }

    /// Numerator degree minus denominator degree, for homogeneous parts.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let n = self.numerator.homogeneous_degree()?;
        let d = self.denominator.homogeneous_degree()?;
        Some(i64::from(n) - i64::from(d))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) / ({})",
            self.numerator.render("l"),
            self.denominator.render("l")
        )
    }
}

/// `(λ_i + λ_j)`, or `2λ_i` when `i == j`.
pub fn pair_sum(i: usize, j: usize, arity: usize) -> Polynomial {
    Polynomial::var(i, arity).add(&Polynomial::var(j, arity))
}
