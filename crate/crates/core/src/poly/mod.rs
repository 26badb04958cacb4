//! Exact sparse multilinear polynomials in the stable-set quotient ring.

mod context;
mod monomial;
mod polynomial;
mod raw;
pub mod text;

use thiserror::Error;

pub use context::QuotientContext;
pub use monomial::Monomial;
pub use polynomial::{FactorKind, LinearFactor, Polynomial};
pub use raw::{reduce, RawMonomial, RawPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {var} out of range for {n} variables")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("self-loop on variable {0}")]
    SelfLoop(usize),
    #[error("monomial {0} is not reduced in the quotient ring")]
    NotReduced(String),
    #[error("monomial {0} listed twice")]
    DuplicateMonomial(String),
}
