use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::poly::{parse_polynomial, parse_var, Rational, Scope, SparsePolynomial, Var};

use super::LndError;

/// A derivation given by the images of the generators; missing generators
/// map to zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derivation {
    images: BTreeMap<Var, SparsePolynomial>,
}

impl Derivation {
    pub fn new(images: BTreeMap<Var, SparsePolynomial>) -> Self {
        debug_assert!(images.keys().all(|v| !v.is_param()));
        Derivation { images: images.into_iter().filter(|(_, p)| !p.is_zero()).collect() }
    }

    pub fn zero() -> Self {
        Derivation::default()
    }

    /// `∂/∂var`.
    pub fn partial(var: Var) -> Self {
        Derivation::new([(var, SparsePolynomial::one())].into())
    }

    pub fn image(&self, var: Var) -> SparsePolynomial {
        self.images.get(&var).cloned().unwrap_or_else(SparsePolynomial::zero)
    }

    pub fn images(&self) -> &BTreeMap<Var, SparsePolynomial> {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    /// Leibniz extension to arbitrary polynomials.
    pub fn apply(&self, p: &SparsePolynomial) -> SparsePolynomial {
        p.derive(&self.images)
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation::new(self.images.iter().map(|(&v, p)| (v, p.scale(c))).collect())
    }

    pub fn max_image_degree(&self) -> u32 {
        self.images.values().map(SparsePolynomial::total_degree).max().unwrap_or(0)
    }

    /// Parses a JSON object mapping variable names to polynomial strings.
    pub fn from_json(value: &serde_json::Value, universe: &BTreeSet<Var>) -> Result<Self, LndError> {
        let obj = value.as_object().ok_or_else(|| LndError::Format("derivation must be a JSON object".into()))?;
        let scope = Scope::Vars(universe);
        let mut images = BTreeMap::new();
        for (name, text) in obj {
            let var = parse_var(name, scope)?;
            if var.is_param() {
                return Err(LndError::Format(format!("parameter {var} cannot carry an image")));
            }
            let text = text
                .as_str()
                .ok_or_else(|| LndError::Format(format!("image of {name} must be a polynomial string")))?;
            let poly = parse_polynomial(text, scope)?;
            if let Some(p) = poly.variables().into_iter().find(Var::is_param) {
                return Err(LndError::Format(format!("image of {name} mentions parameter {p}")));
            }
            images.insert(var, poly);
        }
        Ok(Derivation::new(images))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self.images.iter().map(|(v, p)| (v.to_string(), serde_json::Value::String(p.to_string())));
        serde_json::Value::Object(map.collect())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.images.iter().map(|(v, p)| format!("{v} -> {p}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePolynomial {
        parse_polynomial(s, Scope::Free).unwrap()
    }

    #[test]
    fn single_leibniz_step() {
        let x = Var::t(1, 1);
        let d = Derivation::new([(x, p("2*T[2][1]"))].into());
        assert_eq!(d.apply(&p("T[1][1]*T[1][2]")), p("2*T[2][1]*T[1][2]"));
        assert!(d.apply(&p("1")).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let universe: BTreeSet<Var> = [Var::t(1, 1), Var::t(1, 2), Var::t(2, 1)].into();
        let value = serde_json::json!({"T[1][1]": "2*T[2][1]", "T[2][1]": "T[1][2]"});
        let d = Derivation::from_json(&value, &universe).unwrap();
        assert_eq!(d.image(Var::t(2, 1)), p("T[1][2]"));
        assert_eq!(Derivation::from_json(&d.to_json(), &universe).unwrap(), d);
        let bad = serde_json::json!({"T[9][9]": "1"});
        assert!(matches!(
            Derivation::from_json(&bad, &universe),
            Err(LndError::Poly(crate::poly::PolyError::UnknownVariable { .. }))
        ));
    }
}
