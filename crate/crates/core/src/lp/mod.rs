//! Exact linear programming.
//!
//! Problems are stated as `min c·y  s.t.  A y = b`, each variable either
//! nonnegative or free. [`Simplex`] is a two-phase revised simplex method
//! over any [`Scalar`]; with [`Rational`](crate::Rational) every pivot is
//! exact, so optimal solutions satisfy the equalities identically.

pub mod cplex;
mod simplex;

use thiserror::Error;

pub use simplex::{Simplex, SolverOptions};

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("pivot budget of {0} exhausted")]
    PivotLimit(u64),
    #[error("row index {row} out of range for {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

/// Sparse column: `(row, value)` pairs.
pub type SparseColumn<S> = Vec<(usize, S)>;

#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    pub num_rows: usize,
    pub objective: Vec<S>,
    pub columns: Vec<SparseColumn<S>>,
    pub rhs: Vec<S>,
    pub bounds: Vec<VarBound>,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(num_rows: usize) -> Self {
        Self {
            num_rows,
            objective: Vec::new(),
            columns: Vec::new(),
            rhs: vec![S::zero(); num_rows],
            bounds: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.columns.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, cost: S, bound: VarBound, column: SparseColumn<S>) -> usize {
        self.objective.push(cost);
        self.columns.push(column);
        self.bounds.push(bound);
        self.columns.len() - 1
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.rhs.len() != self.num_rows {
            return Err(LpError::Dimension(format!(
                "{} right-hand sides for {} rows",
                self.rhs.len(),
                self.num_rows
            )));
        }
        if self.objective.len() != self.columns.len() || self.bounds.len() != self.columns.len() {
            return Err(LpError::Dimension("objective, columns and bounds disagree".into()));
        }
        for col in &self.columns {
            check_column(col, self.num_rows)?;
        }
        Ok(())
    }

    /// `A y - b`, for exactness checks.
    pub fn residual(&self, y: &[S]) -> Vec<S> {
        let mut r: Vec<S> = self.rhs.iter().map(|b| -b.clone()).collect();
        for (col, v) in self.columns.iter().zip(y) {
            for (row, a) in col {
                r[*row] = r[*row].add_ref(&a.mul_ref(v));
            }
        }
        r
    }

    pub fn objective_value(&self, y: &[S]) -> S {
        self.objective
            .iter()
            .zip(y)
            .fold(S::zero(), |acc, (c, v)| acc.add_ref(&c.mul_ref(v)))
    }
}

pub(crate) fn check_column<S>(col: &SparseColumn<S>, rows: usize) -> Result<(), LpError> {
    for &(row, _) in col {
        if row >= rows {
            return Err(LpError::RowOutOfRange { row, rows });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    /// Optimal objective; `None` unless `status` is `Optimal`.
    pub value: Option<S>,
    /// Primal point in the caller's variable order (zeros unless optimal).
    pub primal: Vec<S>,
}

/// One-shot solve with default options.
pub fn solve<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpSolution<S>, LpError> {
    Simplex::new(lp, SolverOptions::default())?.solve()
}
