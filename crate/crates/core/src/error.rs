use thiserror::Error;

use crate::env::{EnvError, VerifyError};
use crate::features::FeatureError;
use crate::graphs::GraphError;
use crate::hierarchy::HierarchyError;
use crate::lp::LpError;
use crate::poly::PolyError;
use crate::qnet::NetError;

/// Malformed textual or JSON input.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid polynomial {input:?}: {reason}")]
    Polynomial { input: String, reason: String },
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("invalid proof text at line {line}: {reason}")]
    ProofText { line: usize, reason: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the failure came from a pivot, generator or search budget.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::Lp(LpError::PivotLimit(_))
                | Error::Env(EnvError::Lp(LpError::PivotLimit(_)))
                | Error::Hierarchy(HierarchyError::Lp(LpError::PivotLimit(_)))
                | Error::Hierarchy(HierarchyError::TooManyGenerators { .. })
                | Error::Graph(GraphError::TooLarge { .. })
        )
    }

    /// Whether the failure is a rejected certificate.
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::Verify(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
