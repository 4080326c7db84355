//! Normal forms modulo a relation set whose leading monomials are pairwise
//! coprime.
//!
//! Coprime leading monomials make every S-polynomial reduce to zero, so the
//! relations already form a Gröbner basis under the block order and the
//! remainder of multivariate division is canonical.

use std::collections::BTreeSet;

use super::monomial::Monomial;
use super::polynomial::SparsePolynomial;
use super::var::Var;
use super::{PolyError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub poly: SparsePolynomial,
    pub lead: Monomial,
    pub lead_coeff: Rational,
    /// `poly` without its leading term.
    tail: SparsePolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RelationSet {
    relations: Vec<Relation>,
    universe: Option<BTreeSet<Var>>,
}

impl RelationSet {
    /// Builds a relation set; the leading monomial of each relation is its
    /// largest monomial under the block order.
    pub fn new(polys: Vec<SparsePolynomial>) -> Result<Self, PolyError> {
        let mut relations = Vec::with_capacity(polys.len());
        for (idx, poly) in polys.into_iter().enumerate() {
            let (lead, lead_coeff) = match poly.leading_term() {
                Some((m, c)) => (m.clone(), c.clone()),
                None => return Err(PolyError::ZeroRelation { index: idx }),
            };
            if lead.is_one() {
                return Err(PolyError::ConstantRelation { index: idx });
            }
            if lead.vars().any(|v| v.is_param()) {
                return Err(PolyError::ParameterInRelation { index: idx });
            }
            let mut tail = poly.clone();
            tail.pop_leading();
            relations.push(Relation { poly, lead, lead_coeff, tail });
        }
        for i in 0..relations.len() {
            for j in (i + 1)..relations.len() {
                if !relations[i].lead.coprime(&relations[j].lead) {
                    return Err(PolyError::LeadingMonomialsNotCoprime { first: i, second: j });
                }
            }
        }
        Ok(RelationSet { relations, universe: None })
    }

    /// Restricts the accepted inputs of [`RelationSet::normal_form`] to
    /// polynomials over `universe` (parameters are always accepted).
    pub fn with_universe(mut self, universe: BTreeSet<Var>) -> Self {
        self.universe = Some(universe);
        self
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn polys(&self) -> impl Iterator<Item = &SparsePolynomial> {
        self.relations.iter().map(|r| &r.poly)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.relations.iter().map(|r| &r.lead)
    }

    /// True when no leading monomial divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.relations.iter().all(|r| !r.lead.divides(m))
    }

    /// Remainder of `p` modulo the relations, after checking that `p` only
    /// uses variables of the universe.
    pub fn normal_form(&self, p: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        if let Some(universe) = &self.universe {
            if let Some(v) = p.variables().into_iter().find(|v| !v.is_param() && !universe.contains(v)) {
                return Err(PolyError::VariableMismatch { name: v.to_string() });
            }
        }
        Ok(self.reduce(p))
    }

    /// Remainder of multivariate division of `p` by the relations.
    pub fn reduce(&self, p: &SparsePolynomial) -> SparsePolynomial {
        let mut work = p.clone();
        let mut rem = SparsePolynomial::zero();
        while let Some((m, c)) = work.pop_leading() {
            match self.relations.iter().find(|r| r.lead.divides(&m)) {
                Some(r) => {
                    let q = m.div(&r.lead).expect("leading monomial divides");
                    let factor = -(c / &r.lead_coeff);
                    work.add_scaled(&factor, &q, &r.tail);
                }
                None => rem.add_term(m, c),
            }
        }
        rem
    }

    pub fn is_zero_mod(&self, p: &SparsePolynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Scope};

    fn p(s: &str) -> SparsePolynomial {
        parse_polynomial(s, Scope::Free).unwrap()
    }

    fn danielewski(c: &str) -> RelationSet {
        RelationSet::new(vec![p(&format!("T[1][1]*T[1][2] - T[2][1]^2 - {c}"))]).unwrap()
    }

    #[test]
    fn relation_reduces_to_zero() {
        let rels = danielewski("1");
        assert!(rels.reduce(&rels.relations()[0].poly).is_zero());
    }

    #[test]
    fn one_division_step() {
        let rels = danielewski("5");
        assert_eq!(rels.reduce(&p("T[1][1]*T[1][2]")), p("T[2][1]^2 + 5"));
        assert_eq!(rels.reduce(&p("S[1]^3")), p("S[1]^3"));
    }

    #[test]
    fn repeated_reduction() {
        let rels = danielewski("1");
        // (xy)^2 = (z^2 + 1)^2
        assert_eq!(rels.reduce(&p("T[1][1]^2*T[1][2]^2")), p("(T[2][1]^2 + 1)^2"));
    }

    #[test]
    fn rejects_overlapping_leads() {
        let err = RelationSet::new(vec![p("T[1][1]*T[1][2] - 1"), p("T[1][1]^2 - T[2][1]")]);
        assert!(matches!(err, Err(PolyError::LeadingMonomialsNotCoprime { first: 0, second: 1 })));
        assert!(matches!(RelationSet::new(vec![p("3")]), Err(PolyError::ConstantRelation { .. })));
    }

    #[test]
    fn universe_check() {
        let universe = [Var::t(1, 1), Var::t(1, 2), Var::t(2, 1)].into_iter().collect();
        let rels = danielewski("1").with_universe(universe);
        assert!(rels.normal_form(&p("T[1][1] * s")).is_ok());
        assert!(matches!(rels.normal_form(&p("S[1]")), Err(PolyError::VariableMismatch { .. })));
    }
}
