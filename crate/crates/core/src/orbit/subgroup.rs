//! One-parameter subgroups of the diagonal torus acting on `T` variables.

use std::collections::BTreeMap;
use std::fmt;

use super::OrbitError;
use crate::poly::{Monomial, Var};
use crate::variety::{PresentedAlgebra, TrinomialData, VarietyType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupLabel {
    /// Scales two positions of one block against each other.
    Lambda { block: u32, u: u32, v: u32 },
    /// Scales the first variable of every block.
    Omega,
    Custom,
}

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupLabel::Lambda { block, u, v } => write!(f, "Lambda({block},{u},{v})"),
            SubgroupLabel::Omega => f.write_str("Omega"),
            SubgroupLabel::Custom => f.write_str("custom"),
        }
    }
}

/// `t · T = t^e · T` for the listed exponents; unlisted variables are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParamSubgroup {
    pub exponents: BTreeMap<Var, i64>,
    pub label: SubgroupLabel,
}

impl OneParamSubgroup {
    pub fn custom(exponents: BTreeMap<Var, i64>) -> Self {
        OneParamSubgroup { exponents: exponents.into_iter().filter(|(_, e)| *e != 0).collect(), label: SubgroupLabel::Custom }
    }

    pub fn exponent(&self, v: Var) -> i64 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }

    /// Exponent of `t` picked up by a monomial.
    pub fn weight(&self, m: &Monomial) -> i64 {
        m.pairs().iter().map(|&(v, e)| self.exponent(v) * e as i64).sum()
    }
}

fn check_position(data: &TrinomialData, block: u32, pos: u32) -> Result<(), OrbitError> {
    if !data.block_indices().contains(&block) || pos == 0 || pos > data.block_size(block) {
        return Err(OrbitError::PositionOutOfBlock { block, pos });
    }
    Ok(())
}

/// `T_{su} ↦ t^{l_{sv}} T_{su}`, `T_{sv} ↦ t^{-l_{su}} T_{sv}`.
pub fn lambda_subtorus(data: &TrinomialData, block: u32, u: u32, v: u32) -> Result<OneParamSubgroup, OrbitError> {
    data.ensure_valid()?;
    check_position(data, block, u)?;
    check_position(data, block, v)?;
    if u == v {
        return Err(OrbitError::SamePosition(u));
    }
    let exponents = BTreeMap::from([
        (Var::t(block, u), data.exponent(block, v) as i64),
        (Var::t(block, v), -(data.exponent(block, u) as i64)),
    ]);
    Ok(OneParamSubgroup { exponents, label: SubgroupLabel::Lambda { block, u, v } })
}

/// Scales `T_{i1}` by `t` to the product of the other blocks' first exponents.
pub fn omega_subtorus(data: &TrinomialData) -> Result<OneParamSubgroup, OrbitError> {
    data.ensure_valid()?;
    if data.kind != VarietyType::Two {
        return Err(OrbitError::WrongType);
    }
    let firsts: Vec<(u32, i64)> = data.block_indices().map(|i| (i, data.exponent(i, 1) as i64)).collect();
    let exponents = firsts
        .iter()
        .map(|&(i, _)| (Var::t(i, 1), firsts.iter().filter(|(j, _)| *j != i).map(|(_, l)| l).product()))
        .collect();
    Ok(OneParamSubgroup { exponents, label: SubgroupLabel::Omega })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupCheck {
    pub acts: bool,
    /// Per relation, the `d` with `g(t·x) = t^d g(x)`, when there is one.
    pub degrees: Vec<Option<i64>>,
}

/// Substitutes `T ↦ t^e T` into every relation. After clearing the lowest
/// power of `t`, the image must be a power of `t` times the relation.
pub fn verify_one_param_subgroup(g: &OneParamSubgroup, alg: &PresentedAlgebra) -> SubgroupCheck {
    let degrees: Vec<Option<i64>> = alg
        .relations
        .polys()
        .map(|rel| {
            let weights: Vec<i64> = rel.terms().map(|(m, _)| g.weight(m)).collect();
            let lowest = *weights.iter().min()?;
            let shifts: Vec<i64> = weights.iter().map(|w| w - lowest).collect();
            shifts.iter().all(|&s| s == shifts[0]).then_some(lowest + shifts[0])
        })
        .collect();
    SubgroupCheck { acts: degrees.iter().all(Option::is_some), degrees }
}
