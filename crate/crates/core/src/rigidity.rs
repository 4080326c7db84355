//! Combinatorial rigidity criterion for trinomial varieties.

use std::collections::BTreeMap;

use crate::variety::{TrinomialData, VarietyError, VarietyType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// The variety itself, free factor included.
    X,
    /// The variety without its free affine factor.
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    MNonzero,
    Type1Clause2,
    Type2Clause3a,
    Type2Clause3b,
    None,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::MNonzero => "m-nonzero",
            Clause::Type1Clause2 => "type1-clause2",
            Clause::Type2Clause3a => "type2-clause3a",
            Clause::Type2Clause3b => "type2-clause3b",
            Clause::None => "none",
        }
    }
}

/// Indices for the satisfied clause: `blocks` holds `a`, `(a, b)` or
/// `(a, b, c)`; `unit_positions` maps every other block to a position with
/// exponent 1; `two_positions` maps `a` and `b` to a position with exponent
/// 2 (clause 3b only).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Witness {
    pub blocks: Vec<u32>,
    pub unit_positions: BTreeMap<u32, u32>,
    pub two_positions: BTreeMap<u32, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityVerdict {
    pub rigid: bool,
    pub clause: Clause,
    pub witness: Option<Witness>,
}

impl RigidityVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let positions = |m: &BTreeMap<u32, u32>| -> serde_json::Value {
            m.iter().map(|(b, p)| (b.to_string(), serde_json::Value::from(*p))).collect::<serde_json::Map<_, _>>().into()
        };
        serde_json::json!({
            "rigid": self.rigid,
            "clause": self.clause.label(),
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "blocks": w.blocks,
                "unit_positions": positions(&w.unit_positions),
                "two_positions": positions(&w.two_positions),
            })),
        })
    }
}

fn unit_position(data: &TrinomialData, i: u32) -> Option<u32> {
    data.block(i).iter().position(|&l| l == 1).map(|j| j as u32 + 1)
}

fn two_position_all_even(data: &TrinomialData, i: u32) -> Option<u32> {
    let block = data.block(i);
    if block.iter().any(|l| l % 2 != 0) {
        return None;
    }
    block.iter().position(|&l| l == 2).map(|j| j as u32 + 1)
}

/// Unit positions for every block outside `excluded`, if they all exist.
fn units_outside(data: &TrinomialData, excluded: &[u32]) -> Option<BTreeMap<u32, u32>> {
    data.block_indices()
        .filter(|i| !excluded.contains(i))
        .map(|i| unit_position(data, i).map(|j| (i, j)))
        .collect()
}

fn clause2(data: &TrinomialData) -> Option<Witness> {
    data.block_indices().find_map(|a| {
        units_outside(data, &[a]).map(|unit_positions| Witness { blocks: vec![a], unit_positions, ..Default::default() })
    })
}

fn clause3a(data: &TrinomialData) -> Option<Witness> {
    for a in data.block_indices() {
        for b in a + 1..=data.r() {
            if let Some(unit_positions) = units_outside(data, &[a, b]) {
                return Some(Witness { blocks: vec![a, b], unit_positions, ..Default::default() });
            }
        }
    }
    None
}

fn clause3b(data: &TrinomialData) -> Option<Witness> {
    for a in data.block_indices() {
        let Some(va) = two_position_all_even(data, a) else { continue };
        for b in a + 1..=data.r() {
            let Some(vb) = two_position_all_even(data, b) else { continue };
            for c in data.block_indices().filter(|&c| c != a && c != b) {
                if let Some(unit_positions) = units_outside(data, &[a, b, c]) {
                    return Some(Witness {
                        blocks: vec![a, b, c],
                        unit_positions,
                        two_positions: [(a, va), (b, vb)].into(),
                    });
                }
            }
        }
    }
    None
}

/// Clauses are tried in the order 1, 2, 3a, 3b (clause 1 only for `X`);
/// the first that holds is reported with its lexicographically smallest
/// witness.
pub fn rigidity_verdict(data: &TrinomialData, target: Target) -> Result<RigidityVerdict, VarietyError> {
    data.ensure_valid()?;
    let nonrigid = |clause, witness| Ok(RigidityVerdict { rigid: false, clause, witness });
    if target == Target::X && data.m != 0 {
        return nonrigid(Clause::MNonzero, None);
    }
    match data.kind {
        VarietyType::One => {
            if let Some(w) = clause2(data) {
                return nonrigid(Clause::Type1Clause2, Some(w));
            }
        }
        VarietyType::Two => {
            if let Some(w) = clause3a(data) {
                return nonrigid(Clause::Type2Clause3a, Some(w));
            }
            if let Some(w) = clause3b(data) {
                return nonrigid(Clause::Type2Clause3b, Some(w));
            }
        }
    }
    Ok(RigidityVerdict { rigid: true, clause: Clause::None, witness: None })
}

/// Re-checks a nonrigid verdict against the clause it cites. Rigid verdicts
/// carry no witness and are accepted as is.
pub fn verify_witness(data: &TrinomialData, target: Target, verdict: &RigidityVerdict) -> bool {
    let in_range = |i: &u32| data.block_indices().contains(i);
    let position_has = |i: u32, j: u32, value: u32| {
        in_range(&i) && j >= 1 && j <= data.block_size(i) && data.exponent(i, j) == value
    };
    let units_ok = |w: &Witness, excluded: &[u32]| {
        data.block_indices()
            .filter(|i| !excluded.contains(i))
            .all(|i| w.unit_positions.get(&i).is_some_and(|&j| position_has(i, j, 1)))
    };
    let distinct = |b: &[u32]| b.iter().enumerate().all(|(k, x)| !b[..k].contains(x));
    match (verdict.clause, &verdict.witness) {
        (Clause::None, None) => verdict.rigid,
        (Clause::MNonzero, None) => !verdict.rigid && target == Target::X && data.m != 0,
        (Clause::Type1Clause2, Some(w)) => {
            !verdict.rigid
                && data.kind == VarietyType::One
                && w.blocks.len() == 1
                && in_range(&w.blocks[0])
                && units_ok(w, &w.blocks)
        }
        (Clause::Type2Clause3a, Some(w)) => {
            !verdict.rigid
                && data.kind == VarietyType::Two
                && w.blocks.len() == 2
                && distinct(&w.blocks)
                && w.blocks.iter().all(in_range)
                && units_ok(w, &w.blocks)
        }
        (Clause::Type2Clause3b, Some(w)) => {
            !verdict.rigid
                && data.kind == VarietyType::Two
                && w.blocks.len() == 3
                && distinct(&w.blocks)
                && w.blocks.iter().all(in_range)
                && units_ok(w, &w.blocks)
                && w.blocks[..2].iter().all(|&i| {
                    w.two_positions.get(&i).is_some_and(|&v| position_has(i, v, 2))
                        && data.block(i).iter().all(|l| l % 2 == 0)
                })
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn type1(l: Vec<Vec<u32>>, m: u32) -> TrinomialData {
        let a = (0..l.len() as i64).map(|i| rational(i, 1)).collect();
        TrinomialData::type1(l, a, m)
    }

    fn type2(l: Vec<Vec<u32>>) -> TrinomialData {
        let n = l.len() as i64;
        let rows = [(0..n).map(|_| rational(1, 1)).collect(), (0..n).map(|i| rational(i, 1)).collect()];
        TrinomialData::type2(l, rows, 0)
    }

    #[test]
    fn free_factor() {
        let d = type1(vec![vec![3], vec![3]], 1);
        let v = rigidity_verdict(&d, Target::X).unwrap();
        assert_eq!(v.clause, Clause::MNonzero);
        assert!(rigidity_verdict(&d, Target::Y).unwrap().rigid);
    }

    #[test]
    fn clause_two() {
        let d = type1(vec![vec![1, 2], vec![3]], 0);
        let v = rigidity_verdict(&d, Target::Y).unwrap();
        assert_eq!(v.clause, Clause::Type1Clause2);
        let w = v.witness.clone().unwrap();
        assert_eq!(w.blocks, vec![2]);
        assert_eq!(w.unit_positions, [(1, 1)].into());
        assert!(verify_witness(&d, Target::Y, &v));
    }

    #[test]
    fn rigid_cubic() {
        let d = type2(vec![vec![3], vec![3], vec![3]]);
        let v = rigidity_verdict(&d, Target::X).unwrap();
        assert!(v.rigid);
        assert!(verify_witness(&d, Target::X, &v));
    }

    #[test]
    fn clause_three_b() {
        let d = type2(vec![vec![2], vec![2, 4], vec![5]]);
        let v = rigidity_verdict(&d, Target::Y).unwrap();
        assert_eq!(v.clause, Clause::Type2Clause3b);
        let w = v.witness.clone().unwrap();
        assert_eq!(w.blocks, vec![0, 1, 2]);
        assert_eq!(w.two_positions, [(0, 1), (1, 1)].into());
        assert!(verify_witness(&d, Target::Y, &v));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let d = type2(vec![vec![2], vec![2, 4], vec![5]]);
        let mut v = rigidity_verdict(&d, Target::Y).unwrap();
        v.witness.as_mut().unwrap().blocks = vec![0, 2, 1];
        assert!(!verify_witness(&d, Target::Y, &v));
    }
}
