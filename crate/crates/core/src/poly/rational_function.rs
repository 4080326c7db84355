use std::fmt;

use super::monomial::Monomial;
use super::polynomial::SparsePolynomial;

/// A quotient `num / den` of polynomials, kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: SparsePolynomial,
    pub den: SparsePolynomial,
}

impl RationalFunction {
    pub fn new(num: SparsePolynomial, den: SparsePolynomial) -> Self {
        RationalFunction { num, den }
    }

    /// Divides numerator and denominator by the largest monomial dividing
    /// every term of both.
    pub fn cancel_monomial_factor(&self) -> RationalFunction {
        let mut common: Option<Monomial> = None;
        for (m, _) in self.num.terms().chain(self.den.terms()) {
            common = Some(match common {
                None => m.clone(),
                Some(c) => c.gcd(m),
            });
        }
        let Some(common) = common.filter(|c| !c.is_one()) else {
            return self.clone();
        };
        let divide = |p: &SparsePolynomial| {
            SparsePolynomial::from_terms(
                p.terms().map(|(m, c)| (m.div(&common).expect("common factor divides"), c.clone())),
            )
        };
        RationalFunction { num: divide(&self.num), den: divide(&self.den) }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Scope};

    #[test]
    fn cancels_shared_monomial() {
        let p = |s: &str| parse_polynomial(s, Scope::Free).unwrap();
        let f = RationalFunction::new(p("2*T[0][1]^2*T[1][1]*T[2][1]^3*T[4][1]"), p("T[0][1]^2*T[2][1]^6"));
        let g = f.cancel_monomial_factor();
        assert_eq!(g.num, p("2*T[1][1]*T[4][1]"));
        assert_eq!(g.den, p("T[2][1]^3"));
    }
}
