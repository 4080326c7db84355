//! Iterating a derivation with coefficients reduced modulo a prime.
//!
//! Reduction modulo `P` commutes with normal forms whenever every relation
//! coefficient is `P`-integral and every leading coefficient is a unit, so a
//! nonzero iterate modulo `P` proves the rational iterate is nonzero. This
//! gives a cheap way to reject derivations that are not nilpotent within a
//! cap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::poly::{Monomial, Rational, SparsePolynomial, Var};
use crate::variety::PresentedAlgebra;

use super::Derivation;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn reduce_int(x: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = ((x % &p) + &p) % &p;
    r.to_u64().expect("residue fits")
}

fn reduce_rational(c: &Rational) -> Option<u64> {
    let d = reduce_int(c.denom());
    (d != 0).then(|| mul(reduce_int(c.numer()), pow(d, P - 2)))
}

type ModPoly = BTreeMap<Monomial, u64>;

fn to_mod(p: &SparsePolynomial) -> Option<ModPoly> {
    let mut out = ModPoly::new();
    for (m, c) in p.terms() {
        let v = reduce_rational(c)?;
        if v != 0 {
            out.insert(m.clone(), v);
        }
    }
    Some(out)
}

fn add_term(p: &mut ModPoly, m: Monomial, c: u64) {
    use std::collections::btree_map::Entry;
    if c == 0 {
        return;
    }
    match p.entry(m) {
        Entry::Occupied(mut e) => {
            let v = (*e.get() + c) % P;
            if v == 0 {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub(crate) struct ModularIterator {
    /// `(lead, -tail / lead coefficient)` per relation.
    rules: Vec<(Monomial, ModPoly)>,
    images: BTreeMap<Var, ModPoly>,
}

impl ModularIterator {
    /// `None` when some coefficient is not a unit or integral modulo `P`.
    pub(crate) fn new(alg: &PresentedAlgebra, delta: &Derivation) -> Option<Self> {
        let mut rules = Vec::new();
        for rel in alg.relations.relations() {
            let lead = reduce_rational(&rel.lead_coeff).filter(|&c| c != 0)?;
            let scale = P - pow(lead, P - 2);
            let mut tail = to_mod(&rel.poly)?;
            tail.remove(&rel.lead);
            for c in tail.values_mut() {
                *c = mul(*c, scale);
            }
            rules.push((rel.lead.clone(), tail));
        }
        let mut images = BTreeMap::new();
        for (v, p) in delta.images() {
            images.insert(*v, to_mod(p)?);
        }
        Some(ModularIterator { rules, images })
    }

    fn reduce(&self, p: ModPoly) -> ModPoly {
        let mut work = p;
        let mut out = ModPoly::new();
        while let Some((m, c)) = work.pop_last() {
            match self.rules.iter().find(|(lead, _)| lead.divides(&m)) {
                Some((lead, tail)) => {
                    let q = m.div(lead).expect("lead divides");
                    for (tm, tc) in tail {
                        add_term(&mut work, q.mul(tm), mul(c, *tc));
                    }
                }
                None => {
                    out.insert(m, c);
                }
            }
        }
        out
    }

    fn derive(&self, p: &ModPoly) -> ModPoly {
        let mut out = ModPoly::new();
        for (m, c) in p {
            for &(v, e) in m.pairs() {
                let Some(img) = self.images.get(&v) else { continue };
                let rest = m.without_one(v).expect("variable occurs");
                let factor = mul(*c, e as u64 % P);
                for (im, ic) in img {
                    add_term(&mut out, rest.mul(im), mul(factor, *ic));
                }
            }
        }
        out
    }

    /// True when `δⁿ(x) ≢ 0 (mod P)` for `n = cap`, which proves `x` is not
    /// killed within the cap.
    pub(crate) fn survives(&self, x: Var, cap: u32, max_terms: usize) -> bool {
        let mut cur = ModPoly::new();
        cur.insert(Monomial::var(x), 1);
        cur = self.reduce(cur);
        for _ in 0..cap {
            if cur.is_empty() {
                return false;
            }
            if cur.len() > max_terms {
                return true;
            }
            cur = self.reduce(self.derive(&cur));
        }
        !cur.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rational, Scope};
    use crate::variety::TrinomialData;

    #[test]
    fn agrees_with_exact_iteration() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1);
        let alg = data.relations().unwrap();
        let p = |s: &str| parse_polynomial(s, Scope::Free).unwrap();
        let lnd = Derivation::new([(Var::t(1, 1), p("2*T[2][1]")), (Var::t(2, 1), p("T[1][2]"))].into());
        let it = ModularIterator::new(&alg, &lnd).unwrap();
        assert!(!it.survives(Var::t(1, 1), 3, 100));
        assert!(it.survives(Var::t(1, 1), 2, 100));
        let euler_like = Derivation::new([(Var::s(1), p("S[1]"))].into());
        let it = ModularIterator::new(&alg, &euler_like).unwrap();
        assert!(it.survives(Var::s(1), 10, 100));
    }
}
