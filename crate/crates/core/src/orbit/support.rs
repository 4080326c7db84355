//! Vanishing patterns and the strata they cut out.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;

use super::{OrbitError, Point};
use crate::lattice::{relation_matrix, GradingGroup};
use crate::poly::Var;
use crate::variety::{TrinomialData, VarietyType};

/// Largest number of `T` variables for which patterns are enumerated.
pub(crate) const MAX_PATTERN_VARS: u32 = 20;

/// The set `J` of `T` variables vanishing on a stratum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportPattern {
    vars: BTreeSet<Var>,
}

impl SupportPattern {
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        SupportPattern { vars: vars.into_iter().filter(Var::is_t).collect() }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn blocks(&self) -> BTreeSet<u32> {
        self.vars.iter().filter_map(Var::block).collect()
    }

    /// Smallest variable of the pattern.
    pub fn anchor(&self) -> Option<Var> {
        self.vars.first().copied()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.vars.iter().map(|v| v.to_string().into()).collect())
    }
}

impl fmt::Display for SupportPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.vars.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Dimension of `L(J)`, or `None` when `J` cannot be the exact vanishing
/// set of a point.
pub(crate) fn pattern_dimension(data: &TrinomialData, pattern: &SupportPattern) -> Option<i64> {
    let touched = pattern.blocks();
    let size = pattern.len() as i64;
    if touched.is_empty() {
        return Some(data.dimension());
    }
    if touched.len() == 1 {
        return Some(data.dimension() - size);
    }
    let all_blocks = data.block_indices().count();
    match data.kind {
        VarietyType::Two if touched.len() == all_blocks => Some(data.n() as i64 - size + data.m as i64),
        _ => None,
    }
}

/// Every vanishing pattern over the `T` variables, smallest first.
pub(crate) fn all_patterns(data: &TrinomialData) -> Result<Vec<SupportPattern>, OrbitError> {
    let vars = data.t_vars();
    let n = vars.len() as u32;
    if n > MAX_PATTERN_VARS {
        return Err(OrbitError::TooManyVariables(n));
    }
    let mut out: Vec<SupportPattern> = (0u64..1 << n)
        .map(|mask| SupportPattern::new(vars.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v)))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The patterns `J` with `L(J)` nonempty, with the dimension of `L(J)`.
pub fn admissible_supports(data: &TrinomialData) -> Result<Vec<(SupportPattern, i64)>, OrbitError> {
    data.ensure_valid()?;
    Ok(all_patterns(data)?
        .into_iter()
        .filter_map(|p| pattern_dimension(data, &p).map(|d| (p, d)))
        .collect())
}

/// Reads off the vanishing pattern of a point of the variety. Coordinates
/// below `epsilon · max(1, max |coordinate|)` count as zero.
pub fn stratum_of_point(point: &Point, data: &TrinomialData, epsilon: f64) -> Result<SupportPattern, OrbitError> {
    let alg = data.relations()?;
    for v in data.variables() {
        if !point.contains_key(&v) {
            return Err(OrbitError::MissingCoordinate(v));
        }
    }
    for (idx, g) in alg.relations.polys().enumerate() {
        let (value, magnitude) = g.evaluate_terms(point);
        if value.norm() > epsilon * magnitude {
            return Err(OrbitError::NotOnVariety { relation: idx, residual: value.norm() });
        }
    }
    let scale = data.t_vars().iter().map(|v| point[v].norm()).fold(1.0, f64::max);
    Ok(SupportPattern::new(data.t_vars().into_iter().filter(|v| point[v].norm() < epsilon * scale)))
}

/// Number of orbits in a nonempty stratum `L(J)`, `J ≠ ∅`, of the full
/// diagonal stabilizer and of its identity component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCounts {
    pub diagonal: u64,
    pub torus: u64,
}

/// The stratum is one orbit of the diagonal group; it splits into as many
/// torus orbits as there are torsion characters generated by the
/// coordinates that do not vanish on it.
pub fn orbit_counts(data: &TrinomialData, pattern: &SupportPattern) -> Result<Option<OrbitCounts>, OrbitError> {
    data.ensure_valid()?;
    if pattern.is_empty() || pattern_dimension(data, pattern).is_none() {
        return Ok(None);
    }
    let group = GradingGroup::from_relations(data.variables(), relation_matrix(data));
    let nonvanishing: Vec<usize> = group
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| !pattern.contains(**v))
        .map(|(k, _)| k)
        .collect();
    let torus = group.torsion_of_image(&nonvanishing).to_u64().unwrap_or(u64::MAX);
    Ok(Some(OrbitCounts { diagonal: 1, torus }))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::poly::rational;

    fn danielewski(c: i64) -> TrinomialData {
        // x·y − z² = c
        TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(c, 1)], 0)
    }

    fn cone() -> TrinomialData {
        TrinomialData::type2(
            vec![vec![2], vec![2], vec![2]],
            [vec![rational(1, 1), rational(0, 1), rational(1, 1)], vec![rational(0, 1), rational(1, 1), rational(1, 1)]],
            0,
        )
    }

    fn pattern(vars: &[Var]) -> SupportPattern {
        SupportPattern::new(vars.iter().copied())
    }

    fn point(values: &[(Var, f64)]) -> Point {
        values.iter().map(|&(v, x)| (v, Complex64::new(x, 0.0))).collect()
    }

    const X: Var = Var::t(1, 1);
    const Y: Var = Var::t(1, 2);
    const Z: Var = Var::t(2, 1);

    #[test]
    fn danielewski_strata() {
        let got = admissible_supports(&danielewski(1)).unwrap();
        let expected = vec![
            (pattern(&[]), 2),
            (pattern(&[X]), 1),
            (pattern(&[Y]), 1),
            (pattern(&[Z]), 1),
            (pattern(&[X, Y]), 0),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn cone_strata() {
        let got = admissible_supports(&cone()).unwrap();
        let (a, b, c) = (Var::t(0, 1), Var::t(1, 1), Var::t(2, 1));
        let patterns: Vec<_> = got.iter().map(|(p, d)| (p.clone(), *d)).collect();
        assert_eq!(
            patterns,
            vec![(pattern(&[]), 2), (pattern(&[a]), 1), (pattern(&[b]), 1), (pattern(&[c]), 1), (pattern(&[a, b, c]), 0)]
        );
    }

    #[test]
    fn reads_vanishing_pattern() {
        let data = danielewski(-1);
        assert_eq!(stratum_of_point(&point(&[(X, 0.0), (Y, 2.0), (Z, 1.0)]), &data, 1e-9).unwrap(), pattern(&[X]));
        assert_eq!(stratum_of_point(&point(&[(X, 1.0), (Y, 3.0), (Z, 2.0)]), &data, 1e-9).unwrap(), pattern(&[]));
        assert!(matches!(
            stratum_of_point(&point(&[(X, 1.0), (Y, 1.0), (Z, 1.0)]), &data, 1e-9),
            Err(OrbitError::NotOnVariety { relation: 0, .. })
        ));
        assert!(matches!(
            stratum_of_point(&point(&[(X, 1.0), (Y, 1.0)]), &data, 1e-9),
            Err(OrbitError::MissingCoordinate(_))
        ));
    }

    #[test]
    fn torus_orbit_counts() {
        let data = danielewski(1);
        let count = |vars: &[Var]| orbit_counts(&data, &pattern(vars)).unwrap().map(|c| c.torus);
        assert_eq!(count(&[X]), Some(2));
        assert_eq!(count(&[Y]), Some(2));
        assert_eq!(count(&[Z]), Some(1));
        assert_eq!(count(&[X, Z]), None);
        assert_eq!(count(&[]), None);
    }
}
