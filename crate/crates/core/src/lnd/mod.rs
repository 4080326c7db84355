//! Locally nilpotent derivations of presented algebras.

mod checks;
mod derivation;
mod exponential;
mod modular;
mod search;

use thiserror::Error;

use crate::lattice::LatticeError;
use crate::poly::{PolyError, SparsePolynomial};

pub use checks::{
    check_aux_degree_zero, check_locally_nilpotent, check_preserves_ideal, classify_type, default_cap,
    homogeneity_degree, homogeneous_components, AuxDegreeReport, IdealCertificate, LndType, NilpotencyReport,
    NilpotencyVerdict, TypeReport,
};
pub use derivation::Derivation;
pub use exponential::{exponential, AutomorphismMap};
pub use search::{search_homogeneous_lnds, SearchBounds};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LndError {
    #[error("derivation does not preserve the ideal; residues {}", display_residues(.residues))]
    IdealNotPreserved { residues: Vec<SparsePolynomial> },
    #[error("derivation is not locally nilpotent within cap {cap}")]
    NotLnd { cap: u32 },
    #[error("derivation is zero")]
    ZeroDerivation,
    #[error("images of {first} and {second} shift degrees differently")]
    NotHomogeneous { first: String, second: String },
    #[error("a rational invariant is required to classify a derivation of a custom algebra")]
    MissingInvariant,
    #[error("invariant has a zero denominator")]
    ZeroDenominator,
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn display_residues(residues: &[SparsePolynomial]) -> String {
    let parts: Vec<String> = residues.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}
