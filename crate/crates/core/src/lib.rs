//! Dynamic semi-algebraic proofs of upper bounds on the stability number.
//!
//! Polynomials live in the Boolean quotient ring of a graph
//! (`x_i^2 = x_i`, `x_i x_j = 0` on edges). A prover repeatedly multiplies a
//! known nonnegative polynomial by `x_i` or `1 - x_i` and re-solves an exact
//! LP for the best certified bound.

pub mod agent;
pub mod env;
pub mod error;
pub mod features;
pub mod graphs;
pub mod hierarchy;
pub mod lp;
pub mod poly;
pub mod qnet;
pub mod rng;
pub mod scalar;

pub use error::{Error, ParseError, Result};
pub use scalar::{NetFloat, Rational, Scalar};

/// Exact polynomial used throughout proofs.
pub type Poly = poly::Polynomial<Rational>;
pub type PolyF64 = poly::Polynomial<f64>;
pub type LinearProgramQ = lp::LinearProgram<Rational>;
pub type LinearProgramF64 = lp::LinearProgram<f64>;
pub type QNetwork64 = qnet::QNetwork<f64>;
pub type QNetwork32 = qnet::QNetwork<f32>;
