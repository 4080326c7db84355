use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::var::Var;
use super::Rational;

/// Exact sparse polynomial with rational coefficients.
///
/// Terms are kept in a map ordered by the monomial order, so the leading
/// term is the last entry. No zero coefficient is ever stored, which makes
/// structural equality coincide with polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Monomial, Rational)> {
        self.terms.pop_last()
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c · m · other`
    pub fn add_scaled(&mut self, c: &Rational, m: &Monomial, other: &SparsePolynomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c * oc);
        }
    }

    pub fn scale(&self, c: &Rational) -> SparsePolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> SparsePolynomial {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Highest exponent of `v` in any term.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Applies the derivation given by `images` (missing variables map to
    /// zero), extended to products by the Leibniz rule.
    pub fn derive(&self, images: &BTreeMap<Var, SparsePolynomial>) -> SparsePolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for &(v, e) in m.pairs() {
                let Some(img) = images.get(&v) else { continue };
                if img.is_zero() {
                    continue;
                }
                let rest = m.without_one(v).expect("variable occurs in monomial");
                let factor = c * Rational::from_integer(BigInt::from(e));
                out.add_scaled(&factor, &rest, img);
            }
        }
        out
    }

    /// Partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> SparsePolynomial {
        let mut images = BTreeMap::new();
        images.insert(v, Self::one());
        self.derive(&images)
    }

    /// Ring-homomorphic substitution. Variables without an assignment are
    /// left in place.
    pub fn substitute(&self, assignment: &BTreeMap<Var, SparsePolynomial>) -> SparsePolynomial {
        let mut cache: BTreeMap<(Var, u32), SparsePolynomial> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Self::constant(c.clone());
            for &(v, e) in m.pairs() {
                match assignment.get(&v) {
                    Some(img) => {
                        let power = cache.entry((v, e)).or_insert_with(|| img.pow(e));
                        acc = &acc * &*power;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_pairs(kept);
            out.add_scaled(&Rational::one(), &kept, &acc);
        }
        out
    }

    /// Numeric evaluation over the complex numbers. Variables missing from
    /// `point` evaluate to zero.
    pub fn evaluate(&self, point: &BTreeMap<Var, Complex64>) -> Complex64 {
        self.evaluate_terms(point).0
    }

    /// Returns the value together with the sum of the absolute values of the
    /// individual terms, which is the natural scale for residual checks.
    pub fn evaluate_terms(&self, point: &BTreeMap<Var, Complex64>) -> (Complex64, f64) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for &(v, e) in m.pairs() {
                let x = point.get(&v).copied().unwrap_or_default();
                t *= x.powu(e);
            }
            magnitude += t.norm();
            value += t;
        }
        (value, magnitude)
    }

    /// Splits off the content: returns `(c, q)` with `self = c·q`, where `q`
    /// has coprime integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (Rational, SparsePolynomial) {
        if self.is_zero() {
            return (Rational::zero(), Self::zero());
        }
        let coeffs: Vec<Rational> = self.terms.values().cloned().collect();
        let (scale, ints) = primitive_integer_vector(&coeffs, true);
        let terms = self
            .terms
            .keys()
            .cloned()
            .zip(ints.into_iter().map(Rational::from_integer))
            .collect();
        (scale, SparsePolynomial { terms })
    }
}

/// Scales a rational vector to coprime integers. When `lead_positive` the
/// last nonzero entry is made positive, otherwise the first. Returns
/// `(c, v)` with `input = c·v`.
pub fn primitive_integer_vector(values: &[Rational], lead_positive: bool) -> (Rational, Vec<BigInt>) {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<BigInt> = values.iter().map(|v| (v * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return (Rational::zero(), ints);
    }
    let pivot = if lead_positive {
        ints.iter().rev().find(|x| !x.is_zero())
    } else {
        ints.iter().find(|x| !x.is_zero())
    };
    if pivot.is_some_and(|p| p.is_negative()) {
        g = -g;
    }
    let out: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    (Rational::new(g, lcm), out)
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    match (c.numer().to_f64(), c.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: shift both down first.
            let bits = c.numer().bits().max(c.denom().bits()).saturating_sub(1000);
            let n = (c.numer() >> bits).to_f64().unwrap_or(f64::NAN);
            let d = (c.denom() >> bits).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl Add<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (m, c) in &self.terms {
            out.add_scaled(c, m, rhs);
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<SparsePolynomial> for SparsePolynomial {
            type Output = SparsePolynomial;
            fn $f(self, rhs: SparsePolynomial) -> SparsePolynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&SparsePolynomial> for SparsePolynomial {
            type Output = SparsePolynomial;
            fn $f(self, rhs: &SparsePolynomial) -> SparsePolynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        -&self
    }
}

impl From<Var> for SparsePolynomial {
    fn from(v: Var) -> Self {
        SparsePolynomial::var(v)
    }
}

impl From<Monomial> for SparsePolynomial {
    fn from(m: Monomial) -> Self {
        SparsePolynomial::monomial(m)
    }
}

/// Prints in the grammar accepted by [`super::parse_polynomial`], leading
/// term first.
impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> SparsePolynomial {
        Var::t(1, 1).into()
    }
    fn y() -> SparsePolynomial {
        Var::t(1, 2).into()
    }
    fn z() -> SparsePolynomial {
        Var::t(2, 1).into()
    }

    #[test]
    fn arithmetic_cancels() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let q = &x().pow(2) - &y().pow(2);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
    }

    #[test]
    fn leibniz_single_step() {
        let mut images = BTreeMap::new();
        images.insert(Var::t(1, 1), &SparsePolynomial::integer(2) * &z());
        let d = (&x() * &y()).derive(&images);
        assert_eq!(d, &(&SparsePolynomial::integer(2) * &z()) * &y());
        assert!(SparsePolynomial::one().derive(&images).is_zero());
    }

    #[test]
    fn substitute_binomial() {
        let s: SparsePolynomial = Var::Param(super::super::Param::S).into();
        let v: SparsePolynomial = Var::t(4, 1).into();
        let mut a = BTreeMap::new();
        a.insert(Var::t(1, 1), &x() + &(&s * &v));
        let got = x().pow(2).substitute(&a);
        let want = &(&x().pow(2) + &(&SparsePolynomial::integer(2) * &(&(&s * &x()) * &v)))
            + &(&s.pow(2) * &v.pow(2));
        assert_eq!(got, want);
    }

    #[test]
    fn evaluates_on_variety_point() {
        let p = &(&(&x() * &y()) - &z().pow(2)) - &SparsePolynomial::one();
        let mut pt = BTreeMap::new();
        pt.insert(Var::t(1, 1), Complex64::new(2.0, 0.0));
        pt.insert(Var::t(1, 2), Complex64::new(1.0, 0.0));
        pt.insert(Var::t(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(p.evaluate(&pt), Complex64::new(0.0, 0.0));
        assert_eq!(SparsePolynomial::zero().evaluate(&pt), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn display_is_leading_first() {
        let p = &(&(&x() * &y()) - &z().pow(2)) - &SparsePolynomial::one();
        assert_eq!(p.to_string(), "T[1][1]*T[1][2] - T[2][1]^2 - 1");
        let q = (-&x()).scale(&Rational::new(3.into(), 2.into()));
        assert_eq!(q.to_string(), "-3/2*T[1][1]");
        assert_eq!(SparsePolynomial::zero().to_string(), "0");
    }

    #[test]
    fn primitive_part_normalizes_sign() {
        let p = (&x().scale(&Rational::new((-4).into(), 3.into()))) + &SparsePolynomial::integer(2);
        let (c, q) = p.primitive_part();
        assert_eq!(q.to_string(), "2*T[1][1] - 3");
        assert_eq!(c, Rational::new((-2).into(), 3.into()));
    }
}
