//! Gradings of presented algebras by finitely generated abelian groups.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::matrix::IntMatrix;
use super::smith::{hermite_normal_form, smith_normal_form, SmithDecomposition};
use super::LatticeError;
use crate::poly::{Monomial, SparsePolynomial, Var};
use crate::variety::{PresentedAlgebra, TrinomialData, VarietyType};

/// An element of `Z^free ⊕ Z/t_1 ⊕ … ⊕ Z/t_k`; torsion entries are kept
/// reduced into `[0, t_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Degree {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl Degree {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|&x| x == 0)
    }

    pub fn free_part(&self) -> Degree {
        Degree { free: self.free.clone(), torsion: Vec::new() }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.free)?;
        if !self.torsion.is_empty() {
            write!(f, " + torsion {:?}", self.torsion)?;
        }
        Ok(())
    }
}

/// Quotient of `Z^variables` by the lattice spanned by the relation rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingGroup {
    pub variables: Vec<Var>,
    pub relation_matrix: IntMatrix,
    pub smith: SmithDecomposition,
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

impl GradingGroup {
    pub fn from_relations(variables: Vec<Var>, relation_matrix: IntMatrix) -> Self {
        assert_eq!(relation_matrix.cols(), variables.len());
        let smith = smith_normal_form(&relation_matrix);
        let rank = smith.rank();
        let torsion = smith.diagonal().into_iter().filter(|d| d > &BigInt::one()).collect();
        GradingGroup { free_rank: variables.len() - rank, variables, relation_matrix, smith, torsion }
    }

    /// A basis of the saturation `(L ⊗ Q) ∩ Z^n` of the relation lattice:
    /// the characters that are trivial on the identity component of the
    /// diagonal group.
    pub fn saturation_rows(&self) -> IntMatrix {
        let rank = self.smith.rank();
        let n = self.variables.len();
        let inv = self.smith.v.unimodular_inverse().expect("Smith transform is unimodular");
        let mut out = IntMatrix::zeros(rank, n);
        for i in 0..rank {
            for j in 0..n {
                out[(i, j)] = inv[(i, j)].clone();
            }
        }
        out
    }

    /// Order of the torsion subgroup of the image of `generators` (indices
    /// into `variables`) in the quotient.
    pub fn torsion_of_image(&self, generators: &[usize]) -> BigInt {
        let rank = self.smith.rank();
        let n = self.variables.len();
        let diag = self.smith.diagonal();
        let torsion_cols: Vec<usize> = (0..rank).filter(|&i| diag[i] > BigInt::one()).collect();
        let t = torsion_cols.len();
        if t == 0 {
            return BigInt::one();
        }
        let width = self.free_rank + t;
        let v = &self.smith.v;
        let mut rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|&g| {
                let mut r: Vec<BigInt> = (rank..n).map(|c| v[(g, c)].clone()).collect();
                r.extend(torsion_cols.iter().map(|&c| v[(g, c)].clone()));
                r
            })
            .collect();
        for (k, &c) in torsion_cols.iter().enumerate() {
            let mut r = vec![BigInt::from(0); width];
            r[self.free_rank + k] = diag[c].clone();
            rows.push(r);
        }
        let h = hermite_normal_form(&IntMatrix::from_rows(&rows, width));
        let torsion_only: Vec<Vec<BigInt>> = (0..h.rows())
            .filter(|&i| (0..self.free_rank).all(|j| h[(i, j)] == BigInt::from(0)))
            .map(|i| h.row(i)[self.free_rank..].to_vec())
            .filter(|r| r.iter().any(|x| *x != BigInt::from(0)))
            .collect();
        let det = IntMatrix::from_rows(&torsion_only, t).determinant();
        let order: BigInt = torsion_cols.iter().map(|&c| diag[c].clone()).product();
        order / num_traits::Signed::abs(&det)
    }

    /// Image of every variable in the quotient. Free parts use the Hermite
    /// form of the projection so they do not depend on the elimination path;
    /// torsion parts use the Smith basis.
    pub fn grading(&self) -> Grading {
        let n = self.variables.len();
        let rank = self.smith.rank();
        let diag = self.smith.diagonal();
        let v = &self.smith.v;
        let mut free_cols = IntMatrix::zeros(self.free_rank, n);
        for (k, col) in (rank..n).enumerate() {
            for j in 0..n {
                free_cols[(k, j)] = v[(j, col)].clone();
            }
        }
        let h = hermite_normal_form(&free_cols);
        let torsion_cols: Vec<usize> = (0..rank).filter(|&i| diag[i] > BigInt::one()).collect();
        let mut weights = BTreeMap::new();
        for (j, &var) in self.variables.iter().enumerate() {
            let free = (0..self.free_rank).map(|k| to_i64(&h[(k, j)])).collect();
            let torsion = torsion_cols.iter().map(|&i| to_i64(&v[(j, i)].mod_floor(&diag[i]))).collect();
            weights.insert(var, Degree { free, torsion });
        }
        Grading {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(to_i64).collect(),
            weights,
        }
    }
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("grading entry fits in i64")
}

/// Degrees of the generators; parameters always have degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub weights: BTreeMap<Var, Degree>,
}

/// The grading by the character group of the acting quasitorus.
pub type WeightAssignment = Grading;
/// A user-supplied grading, e.g. by a quasitorus lifting the action.
pub type AuxiliaryGrading = Grading;

impl Grading {
    pub fn new(free_rank: usize, torsion: Vec<i64>, weights: BTreeMap<Var, Degree>) -> Result<Self, LatticeError> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(LatticeError::BadTorsion);
        }
        let mut g = Grading { free_rank, torsion, weights: BTreeMap::new() };
        for (var, d) in weights {
            if d.free.len() != free_rank || d.torsion.len() != g.torsion.len() {
                return Err(LatticeError::DegreeShape { var: var.to_string() });
            }
            let d = g.normalize(d);
            g.weights.insert(var, d);
        }
        Ok(g)
    }

    /// The trivial grading of the given variables.
    pub fn trivial(vars: impl IntoIterator<Item = Var>) -> Self {
        Grading { free_rank: 0, torsion: Vec::new(), weights: vars.into_iter().map(|v| (v, Degree::default())).collect() }
    }

    pub fn zero(&self) -> Degree {
        Degree { free: vec![0; self.free_rank], torsion: vec![0; self.torsion.len()] }
    }

    fn normalize(&self, mut d: Degree) -> Degree {
        for (x, &t) in d.torsion.iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(t);
        }
        d
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        self.combine(a, b, 1)
    }

    pub fn sub(&self, a: &Degree, b: &Degree) -> Degree {
        self.combine(a, b, -1)
    }

    fn combine(&self, a: &Degree, b: &Degree, sign: i64) -> Degree {
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + sign * y).collect();
        let torsion = a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + sign * y).collect();
        self.normalize(Degree { free, torsion })
    }

    pub fn weight(&self, var: Var) -> Result<Degree, LatticeError> {
        if var.is_param() {
            return Ok(self.zero());
        }
        self.weights.get(&var).cloned().ok_or_else(|| LatticeError::Ungraded { var: var.to_string() })
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Result<Degree, LatticeError> {
        let mut d = self.zero();
        for &(var, e) in m.pairs() {
            let w = self.weight(var)?;
            for (x, y) in d.free.iter_mut().zip(&w.free) {
                *x += y * e as i64;
            }
            for (x, y) in d.torsion.iter_mut().zip(&w.torsion) {
                *x += y * e as i64;
            }
        }
        Ok(self.normalize(d))
    }

    /// Common degree of all monomials of `p`.
    pub fn degree_of(&self, p: &SparsePolynomial) -> Result<Degree, LatticeError> {
        self.common_degree(p, false)
    }

    /// Common degree in the free part only (the torus grading).
    pub fn free_degree_of(&self, p: &SparsePolynomial) -> Result<Degree, LatticeError> {
        self.common_degree(p, true)
    }

    fn common_degree(&self, p: &SparsePolynomial, free_only: bool) -> Result<Degree, LatticeError> {
        let mut first: Option<(&Monomial, Degree)> = None;
        for (m, _) in p.terms() {
            let mut d = self.monomial_degree(m)?;
            if free_only {
                d = d.free_part();
            }
            match &first {
                None => first = Some((m, d)),
                Some((m0, d0)) if *d0 != d => {
                    return Err(LatticeError::NotHomogeneous {
                        first: m0.to_string(),
                        first_degree: Box::new(d0.clone()),
                        second: m.to_string(),
                        second_degree: Box::new(d),
                    })
                }
                Some(_) => {}
            }
        }
        first.map(|(_, d)| d).ok_or(LatticeError::ZeroPolynomial)
    }

    /// Degree of every variable under the linear functional `coeffs` on the
    /// free part.
    pub fn projection(&self, coeffs: &[i64]) -> BTreeMap<Var, i64> {
        self.weights
            .iter()
            .map(|(&v, d)| (v, d.free.iter().zip(coeffs).map(|(a, b)| a * b).sum()))
            .collect()
    }
}

/// Relation rows in `Z^variables`, one column per variable of `data`.
///
/// Type 1 relations carry a nonzero constant, so every block monomial must
/// have degree zero; type 2 only identifies consecutive block monomials.
pub fn relation_matrix(data: &TrinomialData) -> IntMatrix {
    let vars = data.variables();
    let column = |v: Var| vars.iter().position(|&w| w == v).expect("variable present");
    let block_row = |i: u32, sign: i64, row: &mut Vec<i64>| {
        for (var, e) in data.block_monomial(i).pairs() {
            row[column(*var)] += sign * *e as i64;
        }
    };
    let mut rows = Vec::new();
    match data.kind {
        VarietyType::One => {
            for i in data.block_indices() {
                let mut row = vec![0; vars.len()];
                block_row(i, 1, &mut row);
                rows.push(row);
            }
        }
        VarietyType::Two => {
            for i in data.first_block()..data.r() {
                let mut row = vec![0; vars.len()];
                block_row(i, 1, &mut row);
                block_row(i + 1, -1, &mut row);
                rows.push(row);
            }
        }
    }
    IntMatrix::from_rows(&rows, vars.len())
}

pub fn grading_group(data: &TrinomialData) -> Result<GradingGroup, LatticeError> {
    data.ensure_valid().map_err(|e| LatticeError::InvalidData(e.to_string()))?;
    Ok(GradingGroup::from_relations(data.variables(), relation_matrix(data)))
}

pub fn weight_assignment(data: &TrinomialData) -> Result<WeightAssignment, LatticeError> {
    Ok(grading_group(data)?.grading())
}

/// The finest grading making every relation homogeneous: monomials of one
/// relation share a degree, and relations with a constant term force degree
/// zero.
pub fn algebra_grading_group(alg: &PresentedAlgebra) -> GradingGroup {
    if let Some(data) = alg.data() {
        return GradingGroup::from_relations(data.variables(), relation_matrix(data));
    }
    let vars = alg.variables.clone();
    let exps = |m: &Monomial| -> Vec<i64> { vars.iter().map(|&v| m.exponent(v) as i64).collect() };
    let mut rows = Vec::new();
    for g in alg.relations.polys() {
        let monos: Vec<&Monomial> = g.terms().map(|(m, _)| m).collect();
        let has_constant = monos.iter().any(|m| m.is_one());
        let base = exps(monos[0]);
        for m in &monos[1..] {
            let e = exps(m);
            rows.push(base.iter().zip(&e).map(|(a, b)| a - b).collect::<Vec<_>>());
        }
        if has_constant {
            rows.push(base);
        }
    }
    rows.retain(|r: &Vec<i64>| r.iter().any(|&x| x != 0));
    GradingGroup::from_relations(vars.clone(), IntMatrix::from_rows(&rows, vars.len()))
}
