//! Integer linear algebra and gradings.

mod grading;
mod matrix;
mod smith;

use thiserror::Error;

pub use grading::{
    algebra_grading_group, grading_group, relation_matrix, weight_assignment, AuxiliaryGrading, Degree, Grading,
    GradingGroup, WeightAssignment,
};
pub use matrix::IntMatrix;
pub use smith::{hermite_normal_form, smith_normal_form, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("not homogeneous: {first} has degree {first_degree} but {second} has degree {second_degree}")]
    NotHomogeneous { first: String, first_degree: Box<Degree>, second: String, second_degree: Box<Degree> },
    #[error("variable {var} has no degree")]
    Ungraded { var: String },
    #[error("degree of {var} does not match the grading group")]
    DegreeShape { var: String },
    #[error("torsion orders must be at least 2")]
    BadTorsion,
    #[error("invalid data: {0}")]
    InvalidData(String),
}
