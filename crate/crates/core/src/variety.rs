//! Defining data of trinomial varieties and their presentations.
//!
//! Blocks are indexed from 1 for type 1 and from 0 for type 2, so the block
//! indices always run over `first_block()..=r()`. Variable `T[i][j]` is the
//! `j`-th variable (1-based) of block `i`, and `S[k]` runs over `1..=m`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lnd::Derivation;
use crate::poly::{
    Monomial, PolyError, Rational, RationalFunction, RelationSet, SparsePolynomial, Var,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarietyType {
    /// Affine relations `T_i^{l_i} - T_{i+1}^{l_{i+1}} = a_{i+1} - a_i`.
    One,
    /// Homogeneous relations given by 3×3 determinants.
    Two,
}

impl VarietyType {
    pub fn as_number(self) -> u8 {
        match self {
            VarietyType::One => 1,
            VarietyType::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constants {
    /// `(a_1, …, a_r)`.
    Type1(Vec<Rational>),
    /// Rows `(a_{10}, …, a_{1r})` and `(a_{20}, …, a_{2r})`.
    Type2([Vec<Rational>; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrinomialData {
    pub kind: VarietyType,
    pub m: u32,
    /// Exponent tuples `l_i`, one per block in block order.
    pub exponents: Vec<Vec<u32>>,
    pub constants: Constants,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    TooFewBlocks,
    EmptyBlock,
    NonPositiveExponent,
    ConstantCount,
    ConstantTypeMismatch,
    DuplicateConstant,
    DependentColumns,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// JSON-pointer style location, e.g. `/blocks/1/l/0` or `/A/2`.
    pub path: String,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> =
            self.violations.iter().map(|v| format!("{:?} at {}", v.kind, v.path)).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("invalid trinomial data: {0}")]
    InvalidData(ValidationReport),
    #[error("invalid example parameters: {0}")]
    InvalidExample(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl TrinomialData {
    pub fn type1(exponents: Vec<Vec<u32>>, a: Vec<Rational>, m: u32) -> Self {
        TrinomialData { kind: VarietyType::One, m, exponents, constants: Constants::Type1(a) }
    }

    pub fn type2(exponents: Vec<Vec<u32>>, rows: [Vec<Rational>; 2], m: u32) -> Self {
        TrinomialData { kind: VarietyType::Two, m, exponents, constants: Constants::Type2(rows) }
    }

    /// Index of the first block (`q` in the usual notation).
    pub fn first_block(&self) -> u32 {
        match self.kind {
            VarietyType::One => 1,
            VarietyType::Two => 0,
        }
    }

    /// Index of the last block.
    pub fn r(&self) -> u32 {
        let count = self.exponents.len() as u32;
        match self.kind {
            VarietyType::One => count,
            VarietyType::Two => count.saturating_sub(1),
        }
    }

    pub fn block_indices(&self) -> std::ops::RangeInclusive<u32> {
        self.first_block()..=self.r()
    }

    pub fn block(&self, i: u32) -> &[u32] {
        &self.exponents[(i - self.first_block()) as usize]
    }

    pub fn block_size(&self, i: u32) -> u32 {
        self.block(i).len() as u32
    }

    pub fn exponent(&self, i: u32, j: u32) -> u32 {
        self.block(i)[(j - 1) as usize]
    }

    pub fn n(&self) -> u32 {
        self.exponents.iter().map(|b| b.len() as u32).sum()
    }

    pub fn t_vars(&self) -> Vec<Var> {
        self.block_indices()
            .flat_map(|i| (1..=self.block_size(i)).map(move |j| Var::t(i, j)))
            .collect()
    }

    pub fn s_vars(&self) -> Vec<Var> {
        (1..=self.m).map(Var::s).collect()
    }

    /// All generators in block order, `S` variables last.
    pub fn variables(&self) -> Vec<Var> {
        let mut v = self.t_vars();
        v.extend(self.s_vars());
        v
    }

    pub fn universe(&self) -> BTreeSet<Var> {
        self.variables().into_iter().collect()
    }

    /// `T_i^{l_i}`.
    pub fn block_monomial(&self, i: u32) -> Monomial {
        Monomial::from_pairs(self.block(i).iter().enumerate().map(|(j, &e)| (Var::t(i, j as u32 + 1), e)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |path: String, kind| violations.push(Violation { path, kind });
        let min_blocks = match self.kind {
            VarietyType::One => 2,
            VarietyType::Two => 3,
        };
        if self.exponents.len() < min_blocks {
            push("/blocks".into(), ViolationKind::TooFewBlocks);
        }
        for (bi, block) in self.exponents.iter().enumerate() {
            if block.is_empty() {
                push(format!("/blocks/{bi}/l"), ViolationKind::EmptyBlock);
            }
            for (j, &e) in block.iter().enumerate() {
                if e == 0 {
                    push(format!("/blocks/{bi}/l/{j}"), ViolationKind::NonPositiveExponent);
                }
            }
        }
        match (&self.kind, &self.constants) {
            (VarietyType::One, Constants::Type1(a)) => {
                if a.len() != self.exponents.len() {
                    push("/A".into(), ViolationKind::ConstantCount);
                }
                for j in 0..a.len() {
                    if a[..j].contains(&a[j]) {
                        push(format!("/A/{j}"), ViolationKind::DuplicateConstant);
                    }
                }
            }
            (VarietyType::Two, Constants::Type2(rows)) => {
                let width = self.exponents.len();
                if rows[0].len() != width || rows[1].len() != width {
                    push("/A".into(), ViolationKind::ConstantCount);
                } else {
                    for j in 0..width {
                        for i in 0..j {
                            let minor = &rows[0][i] * &rows[1][j] - &rows[0][j] * &rows[1][i];
                            if minor.is_zero() {
                                push(format!("/A/{j}"), ViolationKind::DependentColumns);
                                break;
                            }
                        }
                    }
                }
            }
            _ => push("/A".into(), ViolationKind::ConstantTypeMismatch),
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), VarietyError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(VarietyError::InvalidData(report))
        }
    }

    /// Generates the `r - 1` defining relations.
    pub fn relations(&self) -> Result<PresentedAlgebra, VarietyError> {
        self.ensure_valid()?;
        let polys = self.relation_polys();
        let relations = RelationSet::new(polys)?.with_universe(self.universe());
        for (rel, i) in relations.relations().iter().zip(self.relation_indices()) {
            debug_assert_eq!(rel.lead, self.block_monomial(i));
        }
        Ok(PresentedAlgebra {
            variables: self.variables(),
            relations,
            origin: Origin::Trinomial(self.clone()),
        })
    }

    /// Index set `I` of the relations, in order.
    pub fn relation_indices(&self) -> std::ops::Range<u32> {
        match self.kind {
            VarietyType::One => 1..self.r(),
            VarietyType::Two => 0..self.r() - 1,
        }
    }

    fn relation_polys(&self) -> Vec<SparsePolynomial> {
        let mono = |i: u32| SparsePolynomial::monomial(self.block_monomial(i));
        match &self.constants {
            Constants::Type1(a) => self
                .relation_indices()
                .map(|i| {
                    let shift = &a[i as usize] - &a[i as usize - 1];
                    &(&mono(i) - &mono(i + 1)) - &SparsePolynomial::constant(shift)
                })
                .collect(),
            Constants::Type2([a1, a2]) => self
                .relation_indices()
                .map(|i| {
                    let i = i as usize;
                    let minor = |p: usize, q: usize| &a1[p] * &a2[q] - &a1[q] * &a2[p];
                    let mut g = mono(i as u32).scale(&minor(i + 1, i + 2));
                    g = &g - &mono(i as u32 + 1).scale(&minor(i, i + 2));
                    &g + &mono(i as u32 + 2).scale(&minor(i, i + 1))
                })
                .collect(),
        }
    }

    /// The same data with the free affine factor removed (`m = 0`).
    pub fn strip_free_part(&self) -> TrinomialData {
        TrinomialData { m: 0, ..self.clone() }
    }

    /// `m + n - r + 1`.
    pub fn dimension(&self) -> i64 {
        self.m as i64 + self.n() as i64 - self.r() as i64 + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Trinomial(TrinomialData),
    /// A hypersurface given directly by its single relation.
    Custom,
}

/// A finitely presented algebra `K[variables] / (relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedAlgebra {
    pub variables: Vec<Var>,
    pub relations: RelationSet,
    pub origin: Origin,
}

impl PresentedAlgebra {
    /// A hypersurface `K[variables] / (relation)`.
    pub fn custom(mut variables: Vec<Var>, relation: SparsePolynomial) -> Result<Self, VarietyError> {
        variables.sort();
        variables.dedup();
        let universe: BTreeSet<Var> = variables.iter().copied().collect();
        if let Some(v) = relation.variables().into_iter().find(|v| !universe.contains(v)) {
            return Err(PolyError::VariableMismatch { name: v.to_string() }.into());
        }
        if variables.iter().any(Var::is_param) {
            return Err(VarietyError::InvalidExample("parameters cannot be generators".into()));
        }
        let relations = RelationSet::new(vec![relation])?.with_universe(universe);
        Ok(PresentedAlgebra { variables, relations, origin: Origin::Custom })
    }

    pub fn universe(&self) -> BTreeSet<Var> {
        self.variables.iter().copied().collect()
    }

    pub fn data(&self) -> Option<&TrinomialData> {
        match &self.origin {
            Origin::Trinomial(d) => Some(d),
            Origin::Custom => None,
        }
    }

    pub fn t_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.variables.iter().copied().filter(Var::is_t)
    }

    pub fn normal_form(&self, p: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        self.relations.normal_form(p)
    }

    /// Krull dimension, assuming the relations form a complete intersection.
    pub fn dimension(&self) -> i64 {
        self.variables.len() as i64 - self.relations.len() as i64
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.polys().map(SparsePolynomial::total_degree).max().unwrap_or(0)
    }
}

/// Variable layout of the hypersurface
/// `x_1⋯x_k (y^b + z^c) = u·v^r`: `x_j = T[0][j]`, `y_j = T[1][j]`,
/// `z_j = T[2][j]`, `u = T[3][1]`, `v_j = T[4][j]`.
pub mod hypersurface_vars {
    use crate::poly::Var;

    pub fn x(j: u32) -> Var {
        Var::t(0, j)
    }
    pub fn y(j: u32) -> Var {
        Var::t(1, j)
    }
    pub fn z(j: u32) -> Var {
        Var::t(2, j)
    }
    pub fn u() -> Var {
        Var::t(3, 1)
    }
    pub fn v(j: u32) -> Var {
        Var::t(4, j)
    }
}

#[derive(Clone, Debug)]
pub struct HypersurfaceExample {
    pub algebra: PresentedAlgebra,
    pub derivation: Derivation,
    /// A rational torus invariant on which the derivation does not vanish.
    pub invariant: RationalFunction,
}

/// Builds `x_1⋯x_k (y^b + z^c) - u·v^r` together with the derivation
/// `u ↦ b_1 x_1⋯x_k y_1^{b_1-1} y_2^{b_2}⋯`, `y_1 ↦ v^r` (zero elsewhere)
/// and the invariant `u v^r / (x_1⋯x_k z^c)`.
pub fn example_hypersurface(
    k: u32,
    b: &[u32],
    c: &[u32],
    p: u32,
    r: &[u32],
) -> Result<HypersurfaceExample, VarietyError> {
    use hypersurface_vars::{u, v, x, y, z};
    if k == 0 || p == 0 || b.is_empty() || c.is_empty() {
        return Err(VarietyError::InvalidExample("k, p and the exponent lists must be nonempty".into()));
    }
    if r.len() != p as usize {
        return Err(VarietyError::InvalidExample(format!("expected {p} exponents for v, got {}", r.len())));
    }
    if b.iter().chain(c).chain(r).any(|&e| e == 0) {
        return Err(VarietyError::InvalidExample("exponents must be positive".into()));
    }
    let prod = |f: fn(u32) -> Var, exps: &[u32]| {
        Monomial::from_pairs(exps.iter().enumerate().map(|(j, &e)| (f(j as u32 + 1), e)))
    };
    let xs = prod(x, &vec![1; k as usize]);
    let yb = prod(y, b);
    let zc = prod(z, c);
    let vr = prod(v, r);
    let uvr = vr.mul(&Monomial::var(u()));

    let relation = &(&SparsePolynomial::monomial(xs.mul(&yb)) + &SparsePolynomial::monomial(xs.mul(&zc)))
        - &SparsePolynomial::monomial(uvr.clone());
    let mut variables: Vec<Var> = (1..=k).map(x).collect();
    variables.extend((1..=b.len() as u32).map(y));
    variables.extend((1..=c.len() as u32).map(z));
    variables.push(u());
    variables.extend((1..=p).map(v));
    let algebra = PresentedAlgebra::custom(variables, relation)?;

    let du = Monomial::from_pairs(
        xs.pairs().iter().copied().chain(yb.pairs().iter().map(|&(var, e)| {
            if var == y(1) {
                (var, e - 1)
            } else {
                (var, e)
            }
        })),
    );
    let b1 = Rational::from_integer(b[0].into());
    let mut images = BTreeMap::new();
    images.insert(u(), SparsePolynomial::term(b1, du));
    images.insert(y(1), SparsePolynomial::monomial(vr));
    let derivation = Derivation::new(images);

    let invariant = RationalFunction::new(
        SparsePolynomial::monomial(uvr),
        SparsePolynomial::monomial(xs.mul(&zc)),
    );
    debug_assert!(!invariant.den.is_zero() && invariant.num.leading_term().is_some_and(|t| t.1.is_one()));
    Ok(HypersurfaceExample { algebra, derivation, invariant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rational, Scope};

    fn p(s: &str) -> SparsePolynomial {
        parse_polynomial(s, Scope::Free).unwrap()
    }

    pub(crate) fn danielewski(c: i64) -> TrinomialData {
        TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(c, 1)], 0)
    }

    #[test]
    fn validates_good_data() {
        assert!(danielewski(1).validate().is_ok());
    }

    #[test]
    fn duplicate_constants() {
        let d = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(1, 1), rational(1, 1)], 0);
        let report = d.validate();
        assert_eq!(
            report.violations,
            vec![Violation { path: "/A/1".into(), kind: ViolationKind::DuplicateConstant }]
        );
    }

    #[test]
    fn dependent_columns() {
        let rows = [
            vec![rational(1, 1), rational(2, 1), rational(1, 1)],
            vec![rational(2, 1), rational(4, 1), rational(0, 1)],
        ];
        let d = TrinomialData::type2(vec![vec![1], vec![1], vec![1]], rows, 0);
        let report = d.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::DependentColumns);
        assert!(matches!(d.relations(), Err(VarietyError::InvalidData(_))));
    }

    #[test]
    fn structural_violations() {
        let d = TrinomialData::type1(vec![vec![0, 1]], vec![rational(1, 1)], 0);
        let kinds: Vec<_> = d.validate().violations.into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::TooFewBlocks));
        assert!(kinds.contains(&ViolationKind::NonPositiveExponent));
        let mut bad = danielewski(1);
        bad.constants = Constants::Type2([vec![], vec![]]);
        assert_eq!(bad.validate().violations[0].kind, ViolationKind::ConstantTypeMismatch);
    }

    #[test]
    fn danielewski_relation() {
        let alg = danielewski(7).relations().unwrap();
        let g: Vec<_> = alg.relations.polys().cloned().collect();
        assert_eq!(g, vec![p("T[1][1]*T[1][2] - T[2][1]^2 - 7")]);
        assert_eq!(alg.relations.relations()[0].lead, danielewski(7).block_monomial(1));
    }

    #[test]
    fn type2_determinant_expansion() {
        let rows = [
            vec![rational(1, 1), rational(0, 1), rational(1, 1)],
            vec![rational(0, 1), rational(1, 1), rational(1, 1)],
        ];
        let d = TrinomialData::type2(vec![vec![2], vec![2], vec![2]], rows, 0);
        let alg = d.relations().unwrap();
        let g: Vec<_> = alg.relations.polys().cloned().collect();
        assert_eq!(g, vec![p("-T[0][1]^2 - T[1][1]^2 + T[2][1]^2")]);
    }

    #[test]
    fn free_variables_stay_out_of_relations() {
        let mut d = danielewski(1);
        d.m = 3;
        let alg = d.relations().unwrap();
        assert_eq!(alg.variables.len(), 6);
        for s in d.s_vars() {
            assert!(alg.relations.polys().all(|g| !g.mentions(s)));
        }
        let stripped = d.strip_free_part();
        assert_eq!(stripped.m, 0);
        assert_eq!(stripped.exponents, d.exponents);
        assert_eq!(stripped.kind, d.kind);
        assert_eq!(danielewski(1).strip_free_part(), danielewski(1));
    }

    #[test]
    fn dimensions() {
        assert_eq!(danielewski(1).dimension(), 2);
        let mut d = danielewski(1);
        d.m = 3;
        assert_eq!(d.dimension(), 5);
        let rows = [
            vec![rational(1, 1), rational(0, 1), rational(1, 1)],
            vec![rational(0, 1), rational(1, 1), rational(1, 1)],
        ];
        let t2 = TrinomialData::type2(vec![vec![2], vec![2], vec![2]], rows, 0);
        assert_eq!(t2.dimension(), 2);
    }

    #[test]
    fn small_hypersurface_instance() {
        let ex = example_hypersurface(1, &[2], &[3], 1, &[1]).unwrap();
        let g = ex.algebra.relations.polys().next().unwrap().clone();
        assert_eq!(g, p("T[0][1]*(T[1][1]^2 + T[2][1]^3) - T[3][1]*T[4][1]"));
        let du = ex.derivation.image(hypersurface_vars::u());
        assert_eq!(du, p("2*T[0][1]*T[1][1]"));
        assert_eq!(ex.derivation.image(hypersurface_vars::y(1)), p("T[4][1]"));
        assert_eq!(ex.invariant.num, p("T[3][1]*T[4][1]"));
        assert_eq!(ex.invariant.den, p("T[0][1]*T[2][1]^3"));
        assert!(example_hypersurface(1, &[2], &[3], 2, &[1]).is_err());
    }
}
