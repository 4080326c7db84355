use std::path::PathBuf;

use thiserror::Error;
use trinomial_core::lattice::LatticeError;
use trinomial_core::lnd::LndError;
use trinomial_core::orbit::OrbitError;
use trinomial_core::poly::PolyError;
use trinomial_core::variety::VarietyError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("at {pointer}: {source}")]
    Polynomial { pointer: String, source: PolyError },
    #[error("unknown command {0}")]
    UnknownCommand(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Lnd(#[from] LndError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

impl CliError {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { pointer: pointer.into(), message: message.into() }
    }
}
