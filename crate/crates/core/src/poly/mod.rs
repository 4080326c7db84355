//! Exact sparse multivariate polynomials over the rationals.

mod monomial;
mod parse;
mod polynomial;
mod rational_function;
mod reduce;
mod var;

use thiserror::Error;

pub use monomial::Monomial;
pub use parse::{parse_polynomial, parse_var, Scope};
pub use polynomial::{primitive_integer_vector, rational_to_f64, SparsePolynomial};
pub use rational_function::RationalFunction;
pub use reduce::{Relation, RelationSet};
pub use var::{Param, Var};

/// Reduced fraction with a positive denominator; construction with a zero
/// denominator panics.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn param_t() -> Var {
    Var::Param(Param::T)
}

pub fn param_s() -> Var {
    Var::Param(Param::S)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {position}: expected {expected}, found {found}")]
    Syntax { position: usize, expected: String, found: String },
    #[error("unknown variable {name} at byte {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("variable {name} is outside the algebra")]
    VariableMismatch { name: String },
    #[error("relation {index} is zero")]
    ZeroRelation { index: usize },
    #[error("relation {index} is a nonzero constant")]
    ConstantRelation { index: usize },
    #[error("relation {index} has a parameter in its leading monomial")]
    ParameterInRelation { index: usize },
    #[error("leading monomials of relations {first} and {second} share a variable")]
    LeadingMonomialsNotCoprime { first: usize, second: usize },
}
