//! Moving one point of a stratum `L(J)`, `J ≠ ∅`, to another by diagonal
//! elements and translations of the free coordinates.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::subgroup::{lambda_subtorus, omega_subtorus, OneParamSubgroup, SubgroupLabel};
use super::support::{stratum_of_point, SupportPattern};
use super::{OrbitError, Point};
use crate::lattice::{relation_matrix, smith_normal_form, GradingGroup, IntMatrix};
use crate::poly::Var;
use crate::variety::{TrinomialData, VarietyType};

/// Tolerance for "this factor is 1" and for character checks.
const UNIT_TOLERANCE: f64 = 1e-12;
const CHARACTER_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalStep {
    /// The one-parameter subgroup used, or `None` for a correction element.
    pub subgroup: Option<SubgroupLabel>,
    pub parameter: Option<Complex64>,
    pub factors: BTreeMap<Var, Complex64>,
    /// Whether the element lies in the identity component of the diagonal
    /// stabilizer.
    pub in_torus: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TransportStep {
    Diagonal(DiagonalStep),
    Translation(BTreeMap<Var, Complex64>),
}

impl TransportStep {
    pub fn apply(&self, point: &mut Point) {
        match self {
            TransportStep::Diagonal(step) => {
                for (v, f) in &step.factors {
                    if let Some(x) = point.get_mut(v) {
                        *x *= f;
                    }
                }
            }
            TransportStep::Translation(shifts) => {
                for (v, d) in shifts {
                    if let Some(x) = point.get_mut(v) {
                        *x += d;
                    }
                }
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = |m: &BTreeMap<Var, Complex64>| -> serde_json::Value {
            m.iter().map(|(v, z)| (v.to_string(), complex_json(*z))).collect::<serde_json::Map<_, _>>().into()
        };
        match self {
            TransportStep::Diagonal(step) => serde_json::json!({
                "kind": "diagonal",
                "subgroup": step.subgroup.as_ref().map_or("correction".to_string(), |l| l.to_string()),
                "parameter": step.parameter.map(complex_json),
                "factors": map(&step.factors),
                "in_torus": step.in_torus,
            }),
            TransportStep::Translation(shifts) => serde_json::json!({ "kind": "translation", "shifts": map(shifts) }),
        }
    }
}

pub(crate) fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportCertificate {
    pub pattern: SupportPattern,
    pub steps: Vec<TransportStep>,
    /// Largest `|image − target| / max(1, |target|)` over all coordinates.
    pub residual: f64,
}

impl TransportCertificate {
    /// True when some step leaves the identity component, i.e. uses a root
    /// of unity the connected torus cannot supply.
    pub fn flagged(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, TransportStep::Diagonal(d) if !d.in_torus))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pattern": self.pattern.to_json(),
            "steps": self.steps.iter().map(TransportStep::to_json).collect::<Vec<_>>(),
            "residual": self.residual,
            "root_of_unity_flag": self.flagged(),
        })
    }
}

pub fn apply_steps(point: &Point, steps: &[TransportStep]) -> Point {
    let mut out = point.clone();
    for s in steps {
        s.apply(&mut out);
    }
    out
}

fn relative_residual(a: &Point, b: &Point) -> f64 {
    b.iter().map(|(v, y)| (a[v] - y).norm() / y.norm().max(1.0)).fold(0.0, f64::max)
}

fn is_unit(z: Complex64) -> bool {
    (z - 1.0).norm() <= UNIT_TOLERANCE
}

fn block_value(data: &TrinomialData, i: u32, p: &Point) -> Complex64 {
    data.block_monomial(i).pairs().iter().map(|&(v, e)| p[&v].powu(e)).product()
}

fn subgroup_step(g: &OneParamSubgroup, t: Complex64) -> TransportStep {
    let factors = g.exponents.iter().map(|(&v, &e)| (v, t.powi(e as i32))).collect();
    TransportStep::Diagonal(DiagonalStep { subgroup: Some(g.label.clone()), parameter: Some(t), factors, in_torus: true })
}

struct Transporter<'a> {
    data: &'a TrinomialData,
    target: &'a Point,
    current: Point,
    steps: Vec<TransportStep>,
}

impl Transporter<'_> {
    fn push(&mut self, step: TransportStep) {
        let trivial = match &step {
            TransportStep::Diagonal(d) => d.factors.values().all(|&f| f == Complex64::new(1.0, 0.0)),
            TransportStep::Translation(s) => s.is_empty(),
        };
        if !trivial {
            step.apply(&mut self.current);
            self.steps.push(step);
        }
    }

    /// Matches one nonzero block monomial with a single Ω step; the linear
    /// relations then force the remaining ones to agree.
    fn omega_step(&mut self, skip: u32) -> Result<(), OrbitError> {
        let omega = omega_subtorus(self.data)?;
        let Some(j) = self.data.block_indices().find(|&j| j != skip) else {
            return Ok(());
        };
        let total: i64 = self.data.block_indices().map(|i| self.data.exponent(i, 1) as i64).product();
        let ratio = block_value(self.data, j, self.target) / block_value(self.data, j, &self.current);
        let t = ratio.powf(1.0 / total as f64);
        self.push(subgroup_step(&omega, t));
        Ok(())
    }

    /// In a block meeting `J`, every surviving coordinate is matched against
    /// the smallest vanishing one.
    fn anchored_block(&mut self, block: u32, pattern: &SupportPattern) -> Result<(), OrbitError> {
        let size = self.data.block_size(block);
        let s = (1..=size).find(|&j| pattern.contains(Var::t(block, j))).expect("block meets the pattern");
        let ls = self.data.exponent(block, s) as f64;
        for v in (1..=size).filter(|&j| !pattern.contains(Var::t(block, j))) {
            let var = Var::t(block, v);
            let t = (self.current[&var] / self.target[&var]).powf(1.0 / ls);
            self.push(subgroup_step(&lambda_subtorus(self.data, block, s, v)?, t));
        }
        Ok(())
    }

    /// In a block with a nonzero monomial, all coordinates but the last are
    /// matched; among the admissible roots, the one bringing the last
    /// coordinate closest to its target is taken.
    fn free_block(&mut self, block: u32) -> Result<(), OrbitError> {
        let w = self.data.block_size(block);
        let last = Var::t(block, w);
        let lw = self.data.exponent(block, w);
        for u in 1..w {
            let var = Var::t(block, u);
            let lu = self.data.exponent(block, u) as i32;
            let principal = (self.target[&var] / self.current[&var]).powf(1.0 / lw as f64);
            let candidates = (0..lw).map(|k| principal * Complex64::from_polar(1.0, TAU * k as f64 / lw as f64));
            let mut best: Option<(f64, Complex64)> = None;
            for t in candidates {
                let miss = (self.current[&last] * t.powi(-lu) - self.target[&last]).norm();
                if best.is_none_or(|(b, _)| miss < b - UNIT_TOLERANCE * b.max(1.0)) {
                    best = Some((miss, t));
                }
            }
            let t = best.expect("at least one root").1;
            self.push(subgroup_step(&lambda_subtorus(self.data, block, u, w)?, t));
        }
        Ok(())
    }

    /// A diagonal element taking the current point to the target. Its
    /// entries off `J` are forced; those on `J` are solved so that it lies in
    /// the identity component when possible, and in the full stabilizer
    /// otherwise.
    fn correction(&mut self, pattern: &SupportPattern) -> Result<(), OrbitError> {
        let t_vars = self.data.t_vars();
        let known: BTreeMap<Var, Complex64> = t_vars
            .iter()
            .filter(|v| !pattern.contains(**v))
            .map(|v| (*v, self.target[v] / self.current[v]))
            .collect();
        if known.values().all(|&c| is_unit(c)) {
            return Ok(());
        }
        let unknown: Vec<Var> = pattern.vars().iter().copied().collect();
        let group = GradingGroup::from_relations(self.data.variables(), relation_matrix(self.data));
        let attempts = [(group.saturation_rows(), true), (relation_matrix(self.data), false)];
        for (rows, in_torus) in attempts {
            if let Some(solved) = solve_characters(&rows, &group.variables, &known, &unknown) {
                let mut factors = known.clone();
                factors.extend(solved);
                self.push(TransportStep::Diagonal(DiagonalStep { subgroup: None, parameter: None, factors, in_torus }));
                return Ok(());
            }
        }
        Err(OrbitError::NumericFailure { residual: f64::INFINITY, tolerance: CHARACTER_TOLERANCE })
    }
}

/// Solves `∏_v c_v^{row_v} = 1` for every row, given the entries in `known`,
/// for the entries in `unknown`, through the Smith form of the unknown
/// columns.
fn solve_characters(
    rows: &IntMatrix,
    vars: &[Var],
    known: &BTreeMap<Var, Complex64>,
    unknown: &[Var],
) -> Option<BTreeMap<Var, Complex64>> {
    let col = |v: &Var| vars.iter().position(|w| w == v).expect("variable of the group");
    let entry = |i: usize, v: &Var| rows[(i, col(v))].to_i32().expect("small exponent");
    let k = rows.rows();
    let a: Vec<Vec<i64>> = (0..k).map(|i| unknown.iter().map(|v| entry(i, v) as i64).collect()).collect();
    let log_rhs: Vec<Complex64> = (0..k)
        .map(|i| known.iter().map(|(v, c)| c.powi(-entry(i, v))).product::<Complex64>().ln())
        .collect();
    let snf = smith_normal_form(&IntMatrix::from_rows(&a, unknown.len()));
    let rank = snf.rank();
    let diag = snf.diagonal();
    let transformed: Vec<Complex64> = (0..k)
        .map(|r| (0..k).map(|i| log_rhs[i] * snf.u[(r, i)].to_f64().expect("finite")).sum())
        .collect();
    let mut y = vec![Complex64::new(0.0, 0.0); unknown.len()];
    for r in 0..rank {
        y[r] = transformed[r] / diag[r].to_f64().expect("finite");
    }
    let solution: BTreeMap<Var, Complex64> = unknown
        .iter()
        .enumerate()
        .map(|(c, v)| {
            let x: Complex64 = (0..unknown.len()).map(|j| y[j] * snf.v[(c, j)].to_f64().expect("finite")).sum();
            (*v, x.exp())
        })
        .collect();
    let consistent = (0..k).all(|i| {
        let value: Complex64 = known
            .iter()
            .chain(&solution)
            .map(|(v, c)| c.powi(entry(i, v)))
            .product();
        (value - 1.0).norm() <= CHARACTER_TOLERANCE
    });
    consistent.then_some(solution)
}

/// Moves `alpha` to `beta` inside their common stratum: Ω for type 2 when
/// one block vanishes, Λ steps anchored at the smallest vanishing variable,
/// Λ steps in the remaining blocks, a final diagonal correction and a
/// translation of the free coordinates.
pub fn transport(
    alpha: &Point,
    beta: &Point,
    data: &TrinomialData,
    epsilon: f64,
) -> Result<TransportCertificate, OrbitError> {
    let first = stratum_of_point(alpha, data, epsilon)?;
    let second = stratum_of_point(beta, data, epsilon)?;
    if first != second {
        return Err(OrbitError::DifferentStrata { first, second });
    }
    if first.is_empty() {
        return Err(OrbitError::EmptySupport);
    }
    let pattern = first;
    let touched = pattern.blocks();
    let anchor_block = pattern.anchor().and_then(|v| v.block()).expect("nonempty pattern");

    let mut tr = Transporter { data, target: beta, current: alpha.clone(), steps: Vec::new() };
    if data.kind == VarietyType::Two && touched.len() == 1 {
        tr.omega_step(anchor_block)?;
    }
    for &block in &touched {
        tr.anchored_block(block, &pattern)?;
    }
    for block in data.block_indices().filter(|i| !touched.contains(i)) {
        tr.free_block(block)?;
    }
    tr.correction(&pattern)?;
    let shifts: BTreeMap<Var, Complex64> =
        data.s_vars().into_iter().map(|v| (v, beta[&v] - tr.current[&v])).filter(|(_, d)| d.norm() > 0.0).collect();
    tr.push(TransportStep::Translation(shifts));

    let residual = relative_residual(&apply_steps(alpha, &tr.steps), beta);
    if residual > epsilon {
        return Err(OrbitError::NumericFailure { residual, tolerance: epsilon });
    }
    Ok(TransportCertificate { pattern, steps: tr.steps, residual })
}

/// Largest defect `|χ(c) − 1|` over the characters defining the full
/// diagonal stabilizer.
pub fn stabilizer_defect(data: &TrinomialData, factors: &BTreeMap<Var, Complex64>) -> f64 {
    let rows = relation_matrix(data);
    let vars = data.variables();
    (0..rows.rows())
        .map(|i| {
            let value: Complex64 = vars
                .iter()
                .enumerate()
                .map(|(c, v)| factors.get(v).map_or(Complex64::new(1.0, 0.0), |f| f.powi(rows[(i, c)].to_i32().unwrap_or(0))))
                .product();
            (value - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    const X: Var = Var::t(1, 1);
    const Y: Var = Var::t(1, 2);
    const Z: Var = Var::t(2, 1);

    fn danielewski() -> TrinomialData {
        // x·y − z² = −1
        TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(1, 1), rational(0, 1)], 0)
    }

    fn point(values: [f64; 3]) -> Point {
        [X, Y, Z].into_iter().zip(values).map(|(v, x)| (v, Complex64::new(x, 0.0))).collect()
    }

    #[test]
    fn single_lambda_step() {
        let cert = transport(&point([0.0, 2.0, 1.0]), &point([0.0, 5.0, 1.0]), &danielewski(), 1e-9).unwrap();
        assert_eq!(cert.steps.len(), 1);
        let TransportStep::Diagonal(step) = &cert.steps[0] else { panic!("expected a diagonal step") };
        assert_eq!(step.subgroup, Some(SubgroupLabel::Lambda { block: 1, u: 1, v: 2 }));
        assert!((step.parameter.unwrap() - Complex64::new(0.4, 0.0)).norm() < 1e-15);
        assert!(!cert.flagged());
        assert!(cert.residual <= 1e-12);
    }

    #[test]
    fn identity_certificate() {
        let a = point([0.0, 2.0, 1.0]);
        let cert = transport(&a, &a, &danielewski(), 1e-9).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.residual, 0.0);
    }

    #[test]
    fn sign_change_needs_a_flagged_element() {
        let data = danielewski();
        let cert = transport(&point([0.0, 2.0, 1.0]), &point([0.0, 2.0, -1.0]), &data, 1e-9).unwrap();
        assert!(cert.flagged());
        let TransportStep::Diagonal(step) = cert.steps.last().unwrap() else { panic!("expected a diagonal step") };
        assert!((step.factors[&Z] + 1.0).norm() < 1e-12);
        assert!(stabilizer_defect(&data, &step.factors) < 1e-12);
    }

    #[test]
    fn rejects_mismatched_strata() {
        let data = danielewski();
        assert!(matches!(
            transport(&point([0.0, 2.0, 1.0]), &point([2.0, 0.0, 1.0]), &data, 1e-9),
            Err(OrbitError::DifferentStrata { .. })
        ));
        assert_eq!(transport(&point([1.0, 0.0, 1.0]).clone(), &point([1.0, 0.0, 1.0]), &data, 1e-9).err(), None);
        assert_eq!(
            transport(&point([2.0, 1.0, 1.732_050_807_568_877_2]), &point([1.0, 3.0, 2.0]), &data, 1e-9).err(),
            Some(OrbitError::EmptySupport)
        );
    }
}
