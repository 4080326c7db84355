//! The stratum census and the finiteness verdict for the open part.

use super::support::{all_patterns, orbit_counts, pattern_dimension, OrbitCounts, SupportPattern};
use super::OrbitError;
use crate::rigidity::{rigidity_verdict, RigidityVerdict, Target};
use crate::variety::TrinomialData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumEntry {
    pub pattern: SupportPattern,
    pub nonempty: bool,
    pub dimension: Option<i64>,
    /// Orbit counts of the diagonal groups; absent for the open stratum and
    /// for empty strata.
    pub orbits: Option<OrbitCounts>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpenPartVerdict {
    FinitelyManyOrbits,
    HypothesisFails,
}

impl OpenPartVerdict {
    pub fn label(self) -> &'static str {
        match self {
            OpenPartVerdict::FinitelyManyOrbits => "finitely-many-G-orbits",
            OpenPartVerdict::HypothesisFails => "hypothesis-fails",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumCensus {
    /// Every vanishing pattern over the `T` variables, smallest first.
    pub strata: Vec<StratumEntry>,
    pub verdict: OpenPartVerdict,
    /// Rigidity of the variety without its free factor.
    pub rigidity: RigidityVerdict,
    pub note: String,
}

impl StratumCensus {
    /// Nonempty strata with at least one vanishing variable.
    pub fn closed_strata(&self) -> impl Iterator<Item = &StratumEntry> {
        self.strata.iter().filter(|s| s.nonempty && !s.pattern.is_empty())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strata: Vec<serde_json::Value> = self
            .strata
            .iter()
            .map(|s| {
                serde_json::json!({
                    "pattern": s.pattern.to_json(),
                    "nonempty": s.nonempty,
                    "dimension": s.dimension,
                    "diagonal_orbits": s.orbits.map(|o| o.diagonal),
                    "torus_orbits": s.orbits.map(|o| o.torus),
                })
            })
            .collect();
        serde_json::json!({
            "strata": strata,
            "closed_strata": self.closed_strata().count(),
            "verdict": self.verdict.label(),
            "rigidity": self.rigidity.to_json(),
            "note": self.note,
        })
    }
}

/// Lists every stratum `L(J)` and decides the open part through the
/// rigidity of the variety without its free factor.
pub fn census(data: &TrinomialData) -> Result<StratumCensus, OrbitError> {
    data.ensure_valid()?;
    let mut strata = Vec::new();
    for pattern in all_patterns(data)? {
        let dimension = pattern_dimension(data, &pattern);
        let orbits = orbit_counts(data, &pattern)?;
        strata.push(StratumEntry { pattern, nonempty: dimension.is_some(), dimension, orbits });
    }
    let rigidity = rigidity_verdict(&data.strip_free_part(), Target::Y)?;
    let (verdict, note) = if rigidity.rigid {
        (
            OpenPartVerdict::HypothesisFails,
            "the variety without its free factor is rigid; for rigid trinomial hypersurfaces the number of orbits is infinite"
                .to_string(),
        )
    } else {
        (
            OpenPartVerdict::FinitelyManyOrbits,
            format!(
                "the variety without its free factor admits a nonzero LND ({}); each closed stratum is one orbit of the diagonal group",
                rigidity.clause.label()
            ),
        )
    };
    Ok(StratumCensus { strata, verdict, rigidity, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use crate::rigidity::Clause;

    fn type2(l: u32) -> TrinomialData {
        TrinomialData::type2(
            vec![vec![l]; 3],
            [vec![rational(1, 1), rational(0, 1), rational(1, 1)], vec![rational(0, 1), rational(1, 1), rational(1, 1)]],
            0,
        )
    }

    #[test]
    fn danielewski_census() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 0);
        let c = census(&data).unwrap();
        assert_eq!(c.closed_strata().count(), 4);
        assert_eq!(c.strata.len(), 8);
        assert_eq!(c.verdict, OpenPartVerdict::FinitelyManyOrbits);
        assert_eq!(c.rigidity.clause, Clause::Type1Clause2);
        assert_eq!(c.rigidity.witness.as_ref().unwrap().blocks, vec![2]);
    }

    #[test]
    fn type2_census() {
        let rigid = census(&type2(3)).unwrap();
        assert_eq!(rigid.closed_strata().count(), 4);
        assert_eq!(rigid.verdict, OpenPartVerdict::HypothesisFails);
        let cone = census(&type2(2)).unwrap();
        assert_eq!(cone.closed_strata().count(), 4);
        assert_eq!(cone.verdict, OpenPartVerdict::FinitelyManyOrbits);
        assert_eq!(cone.rigidity.clause, Clause::Type2Clause3b);
    }
}
