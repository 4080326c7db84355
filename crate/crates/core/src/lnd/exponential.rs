use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::poly::{param_s, param_t, Rational, SparsePolynomial, Var};
use crate::variety::PresentedAlgebra;

use super::checks::{check_locally_nilpotent, nil_chain};
use super::{Derivation, LndError};

/// A ring endomorphism given by generator images, polynomial in the flow
/// parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismMap {
    pub images: BTreeMap<Var, SparsePolynomial>,
}

/// `x ↦ Σ sⁿ/n!·δⁿ(x)`, each `δⁿ(x)` reduced.
pub fn exponential(alg: &PresentedAlgebra, delta: &Derivation, cap: Option<u32>) -> Result<AutomorphismMap, LndError> {
    let report = check_locally_nilpotent(alg, delta, cap)?;
    if !report.is_lnd() {
        return Err(LndError::NotLnd { cap: report.cap });
    }
    let s = SparsePolynomial::var(param_s());
    let mut images = BTreeMap::new();
    for &x in &alg.variables {
        let chain = nil_chain(alg, delta, &SparsePolynomial::var(x), report.cap).expect("nilpotency verified");
        let mut image = SparsePolynomial::zero();
        let mut factorial = BigInt::from(1);
        let mut s_power = SparsePolynomial::one();
        for (n, term) in chain.iter().enumerate() {
            if n > 0 {
                factorial *= n;
                s_power = &s_power * &s;
            }
            let coeff = Rational::new(1.into(), factorial.clone());
            image = &image + &(&s_power * term).scale(&coeff);
        }
        images.insert(x, image);
    }
    Ok(AutomorphismMap { images })
}

impl AutomorphismMap {
    pub fn apply(&self, p: &SparsePolynomial) -> SparsePolynomial {
        p.substitute(&self.images)
    }

    /// Replaces the parameter `s` by `value` in every image.
    pub fn specialize(&self, value: &SparsePolynomial) -> AutomorphismMap {
        let assignment = [(param_s(), value.clone())].into();
        AutomorphismMap { images: self.images.iter().map(|(&v, p)| (v, p.substitute(&assignment))).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(&v, p)| *p == SparsePolynomial::var(v))
    }

    /// `NF(g_i(φ))` for every relation; all zero for an automorphism of the
    /// quotient.
    pub fn relation_residues(&self, alg: &PresentedAlgebra) -> Vec<SparsePolynomial> {
        alg.relations.polys().map(|g| alg.relations.reduce(&self.apply(g))).collect()
    }

    /// Per generator, `NF(φ_s(φ_t(x)) − φ_{s+t}(x))` with `t` as the second
    /// parameter.
    pub fn composition_defects(&self, alg: &PresentedAlgebra) -> BTreeMap<Var, SparsePolynomial> {
        let t = SparsePolynomial::var(param_t());
        let s = SparsePolynomial::var(param_s());
        let at_t = self.specialize(&t);
        let at_sum = self.specialize(&(&s + &t));
        self.images
            .keys()
            .map(|&x| {
                let composed = self.apply(&at_t.images[&x]);
                (x, alg.relations.reduce(&(&composed - &at_sum.images[&x])))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self.images.iter().map(|(v, p)| (v.to_string(), serde_json::Value::String(p.to_string())));
        serde_json::Value::Object(map.collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rational, Scope};
    use crate::variety::{example_hypersurface, hypersurface_vars as hv, TrinomialData};

    fn p(s: &str) -> SparsePolynomial {
        parse_polynomial(s, Scope::Free).unwrap()
    }

    #[test]
    fn translation() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1);
        let alg = data.relations().unwrap();
        let phi = exponential(&alg, &Derivation::partial(Var::s(1)), None).unwrap();
        assert_eq!(phi.images[&Var::s(1)], p("S[1] + s"));
        assert!(phi.specialize(&SparsePolynomial::zero()).is_identity());
    }

    #[test]
    fn example_flow() {
        let ex = example_hypersurface(1, &[2], &[3], 1, &[1]).unwrap();
        let phi = exponential(&ex.algebra, &ex.derivation, None).unwrap();
        assert_eq!(phi.images[&hv::u()], p("T[3][1] + 2*T[0][1]*T[1][1]*s + T[0][1]*T[4][1]*s^2"));
        assert_eq!(phi.images[&hv::y(1)], p("T[1][1] + s*T[4][1]"));
        let f = ex.algebra.relations.polys().next().unwrap();
        assert_eq!(phi.apply(f), *f);
        assert!(phi.composition_defects(&ex.algebra).values().all(SparsePolynomial::is_zero));
    }

    #[test]
    fn rejects_non_nilpotent() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1);
        let alg = data.relations().unwrap();
        let d = Derivation::new([(Var::s(1), p("S[1]"))].into());
        assert!(matches!(exponential(&alg, &d, Some(5)), Err(LndError::NotLnd { cap: 5 })));
    }
}
