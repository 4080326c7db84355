//! Vanishing-pattern strata, one-parameter subgroups and transport of points
//! inside a stratum by diagonal elements.

mod census;
mod sampler;
mod subgroup;
mod support;
mod transport;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::Var;
use crate::variety::VarietyError;

pub use census::{census, OpenPartVerdict, StratumCensus, StratumEntry};
pub use sampler::{sample_pattern, PatternSample, PatternSampler};
pub use subgroup::{lambda_subtorus, omega_subtorus, verify_one_param_subgroup, OneParamSubgroup, SubgroupCheck, SubgroupLabel};
pub use support::{admissible_supports, orbit_counts, stratum_of_point, OrbitCounts, SupportPattern};
pub use transport::{apply_steps, stabilizer_defect, transport, DiagonalStep, TransportCertificate, TransportStep};

/// A complex point of the total coordinate space.
pub type Point = BTreeMap<Var, Complex64>;

/// Default zero threshold, relative to the largest coordinate.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error("point has no coordinate for {0}")]
    MissingCoordinate(Var),
    #[error("point is off the variety: relation {relation} has residual {residual:e}")]
    NotOnVariety { relation: usize, residual: f64 },
    #[error("positions u and v coincide ({0})")]
    SamePosition(u32),
    #[error("position {pos} is outside block {block}")]
    PositionOutOfBlock { block: u32, pos: u32 },
    #[error("the subgroup requires data of type 2")]
    WrongType,
    #[error("points lie in different strata: {first} and {second}")]
    DifferentStrata { first: SupportPattern, second: SupportPattern },
    #[error("both points lie in the open stratum, which transport does not cover")]
    EmptySupport,
    #[error("transport residual {residual:e} exceeds tolerance {tolerance:e}")]
    NumericFailure { residual: f64, tolerance: f64 },
    #[error("{0} T variables is too many to enumerate vanishing patterns")]
    TooManyVariables(u32),
}
