use std::collections::BTreeMap;

use crate::lattice::{Degree, Grading, LatticeError};
use crate::poly::{PolyError, RationalFunction, SparsePolynomial, Var};
use crate::variety::PresentedAlgebra;

use super::{Derivation, LndError};

/// Iterates stop once a polynomial grows past this many terms; the
/// generator is then reported as exceeding the cap.
pub(crate) const MAX_TERMS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCertificate {
    pub preserved: bool,
    /// `NF(δ(g_i))` for every relation, in order.
    pub residues: Vec<SparsePolynomial>,
}

pub(crate) fn ensure_over(alg: &PresentedAlgebra, delta: &Derivation) -> Result<(), LndError> {
    let universe = alg.universe();
    for (v, img) in delta.images() {
        if !universe.contains(v) {
            return Err(PolyError::VariableMismatch { name: v.to_string() }.into());
        }
        if let Some(w) = img.variables().into_iter().find(|w| !universe.contains(w)) {
            return Err(PolyError::VariableMismatch { name: w.to_string() }.into());
        }
    }
    Ok(())
}

pub fn check_preserves_ideal(alg: &PresentedAlgebra, delta: &Derivation) -> Result<IdealCertificate, LndError> {
    ensure_over(alg, delta)?;
    let residues: Vec<SparsePolynomial> =
        alg.relations.polys().map(|g| alg.relations.reduce(&delta.apply(g))).collect();
    Ok(IdealCertificate { preserved: residues.iter().all(SparsePolynomial::is_zero), residues })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilpotencyVerdict {
    LocallyNilpotent,
    /// Inconclusive: some generator survived `cap` applications.
    NotNilpotentWithinCap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    pub verdict: NilpotencyVerdict,
    /// Least `n` with `δⁿ(x) ≡ 0`, or `None` when the cap was exceeded.
    pub nil_degrees: BTreeMap<Var, Option<u32>>,
    pub cap: u32,
}

impl NilpotencyReport {
    pub fn is_lnd(&self) -> bool {
        self.verdict == NilpotencyVerdict::LocallyNilpotent
    }
}

/// `2 + dim · (max image degree) · (max relation degree)`.
pub fn default_cap(alg: &PresentedAlgebra, delta: &Derivation) -> u32 {
    let dim = alg.dimension().max(1) as u32;
    let image = delta.max_image_degree().max(1);
    let relation = alg.max_relation_degree().max(1);
    2 + dim * image * relation
}

/// `[p, δp, …, δ^{n-1}p]` reduced, where `δⁿp ≡ 0`; `None` if `n > cap`.
pub(crate) fn nil_chain(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    p: &SparsePolynomial,
    cap: u32,
) -> Option<Vec<SparsePolynomial>> {
    nil_chain_within(alg, delta, p, cap, MAX_TERMS)
}

pub(crate) fn nil_chain_within(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    p: &SparsePolynomial,
    cap: u32,
    max_terms: usize,
) -> Option<Vec<SparsePolynomial>> {
    let mut chain = Vec::new();
    let mut cur = alg.relations.reduce(p);
    for _ in 0..cap {
        if cur.is_zero() {
            return Some(chain);
        }
        let next = alg.relations.reduce(&delta.apply(&cur));
        chain.push(cur);
        if next.len() > max_terms {
            return None;
        }
        cur = next;
    }
    cur.is_zero().then_some(chain)
}

pub fn check_locally_nilpotent(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    cap: Option<u32>,
) -> Result<NilpotencyReport, LndError> {
    let cert = check_preserves_ideal(alg, delta)?;
    if !cert.preserved {
        return Err(LndError::IdealNotPreserved { residues: cert.residues });
    }
    let cap = cap.unwrap_or_else(|| default_cap(alg, delta));
    let mut nil_degrees = BTreeMap::new();
    for &x in &alg.variables {
        let degree = nil_chain(alg, delta, &SparsePolynomial::var(x), cap).map(|c| c.len() as u32);
        nil_degrees.insert(x, degree);
    }
    let verdict = if nil_degrees.values().all(Option::is_some) {
        NilpotencyVerdict::LocallyNilpotent
    } else {
        NilpotencyVerdict::NotNilpotentWithinCap
    };
    Ok(NilpotencyReport { verdict, nil_degrees, cap })
}

fn reduced_images(alg: &PresentedAlgebra, delta: &Derivation) -> Vec<(Var, SparsePolynomial)> {
    delta
        .images()
        .iter()
        .map(|(&v, p)| (v, alg.relations.reduce(p)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

/// The common shift `deg δ(x) − deg x` in the free part of `w`, over all
/// generators with a nonzero reduced image.
pub fn homogeneity_degree(alg: &PresentedAlgebra, delta: &Derivation, w: &Grading) -> Result<Degree, LndError> {
    ensure_over(alg, delta)?;
    let mut first: Option<(Var, Degree)> = None;
    for (x, img) in reduced_images(alg, delta) {
        let shift = w.sub(&w.free_degree_of(&img)?, &w.weight(x)?.free_part());
        match &first {
            None => first = Some((x, shift)),
            Some((y, s)) if *s != shift => {
                return Err(LndError::NotHomogeneous { first: y.to_string(), second: x.to_string() })
            }
            Some(_) => {}
        }
    }
    first.map(|(_, d)| d).ok_or(LndError::ZeroDerivation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LndType {
    Vertical,
    Horizontal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeReport {
    pub kind: LndType,
    /// Verdict from the images of the `T` variables (trinomial bases only).
    pub by_images: Option<LndType>,
    /// `δ(N/D)` by the quotient rule, numerator reduced, when an invariant
    /// was supplied.
    pub invariant_value: Option<RationalFunction>,
    pub by_invariant: Option<LndType>,
}

impl TypeReport {
    pub fn paths_agree(&self) -> bool {
        match (self.by_images, self.by_invariant) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

/// Quotient rule `δ(N/D) = (δN·D − N·δD) / D²` with the numerator reduced.
pub fn derive_invariant(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    invariant: &RationalFunction,
) -> Result<RationalFunction, LndError> {
    if invariant.den.is_zero() {
        return Err(LndError::ZeroDenominator);
    }
    let num = &(&delta.apply(&invariant.num) * &invariant.den) - &(&invariant.num * &delta.apply(&invariant.den));
    let num = alg.normal_form(&num)?;
    Ok(RationalFunction::new(num, invariant.den.pow(2)).cancel_monomial_factor())
}

/// Vertical iff `δ` kills the rational torus invariants. On trinomial
/// algebras this is read off the images of the `T` variables; otherwise an
/// invariant must be supplied.
pub fn classify_type(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    invariant: Option<&RationalFunction>,
) -> Result<TypeReport, LndError> {
    ensure_over(alg, delta)?;
    let by_images = alg.data().map(|_| {
        let moves_t = alg.t_vars().any(|x| !alg.relations.reduce(&delta.image(x)).is_zero());
        if moves_t {
            LndType::Horizontal
        } else {
            LndType::Vertical
        }
    });
    let (invariant_value, by_invariant) = match invariant {
        Some(inv) => {
            let value = derive_invariant(alg, delta, inv)?;
            let kind = if value.num.is_zero() { LndType::Vertical } else { LndType::Horizontal };
            (Some(value), Some(kind))
        }
        None => (None, None),
    };
    let kind = by_images.or(by_invariant).ok_or(LndError::MissingInvariant)?;
    Ok(TypeReport { kind, by_images, invariant_value, by_invariant })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxDegreeReport {
    /// Homogeneous of degree zero, torsion included.
    pub degree_zero: bool,
    /// Some `δ(T_ij)` is nonzero.
    pub moves_some_t: bool,
}

pub fn check_aux_degree_zero(
    alg: &PresentedAlgebra,
    delta: &Derivation,
    h: &Grading,
) -> Result<AuxDegreeReport, LndError> {
    ensure_over(alg, delta)?;
    let images = reduced_images(alg, delta);
    let mut degree_zero = true;
    for (x, img) in &images {
        let shift = match h.degree_of(img) {
            Ok(d) => h.sub(&d, &h.weight(*x)?),
            Err(LatticeError::NotHomogeneous { .. }) => {
                degree_zero = false;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        if !shift.is_zero() {
            degree_zero = false;
            break;
        }
    }
    let moves_some_t = images.iter().any(|(x, _)| x.is_t());
    Ok(AuxDegreeReport { degree_zero, moves_some_t })
}

/// Splits `δ` into homogeneous pieces for the `Z`-grading `projection`
/// (missing variables have degree zero), keyed by degree.
pub fn homogeneous_components(delta: &Derivation, projection: &BTreeMap<Var, i64>) -> BTreeMap<i64, Derivation> {
    let deg = |v: &Var| projection.get(v).copied().unwrap_or(0);
    let mut parts: BTreeMap<i64, BTreeMap<Var, SparsePolynomial>> = BTreeMap::new();
    for (x, img) in delta.images() {
        for (m, c) in img.terms() {
            let d = m.pairs().iter().map(|(v, e)| deg(v) * *e as i64).sum::<i64>() - deg(x);
            let slot = parts.entry(d).or_default().entry(*x).or_insert_with(SparsePolynomial::zero);
            slot.add_term(m.clone(), c.clone());
        }
    }
    parts.into_iter().map(|(d, images)| (d, Derivation::new(images))).collect()
}
