//! The dynamic proof environment.
//!
//! A state holds the objective `f`, the memory of polynomials known to be
//! nonnegative (axioms `x_i`, `1 - x_i` and derived lemmas), the edge
//! equalities, and the best bound `γ` certified by a nonnegative rational
//! combination of memory elements:
//!
//! ```text
//! min γ  s.t.  γ - f = Σ λ_k m_k  (coefficientwise, in the quotient ring),  λ ≥ 0
//! ```
//!
//! An action multiplies one memory element by `x_i` or `1 - x_i`. The reward
//! is the decrease of `γ`, which is never negative because the feasible set
//! only grows.

mod episode;
mod render;
mod trace;
mod verify;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

pub use episode::{continue_episode, run_episode, EpisodeOutcome, Policy};
pub use render::{parse_proof_text, render_proof};
pub use trace::{extract_proof, factor_from_str, factor_to_string, Premise, ProofTrace, TraceStep};
pub use verify::{verify, VerificationReport, VerifyError};

use crate::graphs::Graph;
use crate::lp::{LinearProgram, LpError, LpStatus, Simplex, SolverOptions, SparseColumn, VarBound};
use crate::poly::{FactorKind, LinearFactor, Monomial, QuotientContext};
use crate::scalar::Rational;
use crate::Poly;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("degree cap must be at least 1")]
    DegreeCap,
    #[error("action {0:?} is not legal in this state")]
    IllegalAction(Action),
    #[error("bound LP ended {0:?}")]
    LpStatus(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Multiply memory entry `memory_index` by `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub memory_index: usize,
    pub factor: LinearFactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Axiom(LinearFactor),
    Derived { parent: usize, factor: LinearFactor },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemoryEntry {
    pub poly: Poly,
    pub provenance: Provenance,
}

/// A legal action together with the lemma it would derive.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub action: Action,
    pub product: Poly,
}

impl Action {
    /// The same action after renaming variable `i` to `perm[i]`. Axiom slots
    /// move with their variable; derived slots keep their index.
    pub fn relabel(self, perm: &[usize]) -> Action {
        let factor = LinearFactor {
            var: perm[self.factor.var],
            kind: self.factor.kind,
        };
        let n = perm.len();
        let memory_index = if self.memory_index < 2 * n {
            2 * perm[self.memory_index / 2] + self.memory_index % 2
        } else {
            self.memory_index
        };
        Action { memory_index, factor }
    }
}

/// Memory slot of an axiom: `x_i` at `2i`, `1 - x_i` at `2i + 1`.
pub fn axiom_index(factor: LinearFactor) -> usize {
    2 * factor.var + usize::from(factor.kind == FactorKind::OneMinusVar)
}

/// MDP state `(f, M_t, E_t)` with its certified bound.
#[derive(Clone, Debug)]
pub struct ProverState {
    graph: Arc<Graph>,
    ctx: Arc<QuotientContext>,
    objective: Poly,
    memory: Vec<MemoryEntry>,
    equalities: Vec<Poly>,
    degree_cap: usize,
    step: usize,
    bound: Rational,
    lambdas: Vec<Rational>,
    lp: Simplex<Rational>,
    rows: HashMap<Monomial, usize>,
    known: HashSet<Poly>,
    candidates: Vec<Candidate>,
}

impl ProverState {
    /// Initial state for the stable-set objective `Σ x_i`.
    pub fn init(graph: &Graph, degree_cap: usize) -> Result<Self, EnvError> {
        Self::with_objective(graph, Poly::sum_of_vars(graph.n()), degree_cap)
    }

    /// Initial state for an arbitrary objective of degree at most `degree_cap`.
    pub fn with_objective(graph: &Graph, objective: Poly, degree_cap: usize) -> Result<Self, EnvError> {
        if degree_cap == 0 {
            return Err(EnvError::DegreeCap);
        }
        let n = graph.n();
        let ctx = Arc::new(graph.context());
        let rows: HashMap<Monomial, usize> = ctx
            .reduced_monomials(degree_cap.max(objective.degree()))
            .into_iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut lp = LinearProgram::new(rows.len());
        for (m, c) in objective.terms() {
            lp.rhs[rows[m]] = c.clone();
        }
        lp.add_var(Rational::one(), VarBound::Free, vec![(rows[&Monomial::one()], Rational::one())]);
        let mut memory = Vec::with_capacity(2 * n);
        for i in 0..n {
            for factor in [LinearFactor::var(i), LinearFactor::one_minus(i)] {
                let poly: Poly = factor.to_poly();
                lp.add_var(Rational::zero(), VarBound::NonNegative, column(&rows, &poly));
                memory.push(MemoryEntry {
                    poly,
                    provenance: Provenance::Axiom(factor),
                });
            }
        }
        let equalities = graph
            .edges()
            .map(|(a, b)| Poly::monomial(Monomial::from_vars([a, b]), Rational::one()))
            .collect();
        let known = memory.iter().map(|e| e.poly.clone()).collect();
        let mut state = Self {
            graph: Arc::new(graph.clone()),
            ctx,
            objective,
            memory,
            equalities,
            degree_cap,
            step: 0,
            bound: Rational::zero(),
            lambdas: Vec::new(),
            lp: Simplex::new(&lp, SolverOptions::default())?,
            rows,
            known,
            candidates: Vec::new(),
        };
        let sol = state.lp.solve()?;
        state.absorb(sol)?;
        for k in 0..state.memory.len() {
            state.push_candidates(k);
        }
        Ok(state)
    }

    fn absorb(&mut self, sol: crate::lp::LpSolution<Rational>) -> Result<(), EnvError> {
        match sol.value {
            Some(v) if sol.status == LpStatus::Optimal => {
                self.bound = v;
                self.lambdas = sol.primal[1..].to_vec();
                Ok(())
            }
            _ => Err(EnvError::LpStatus(sol.status)),
        }
    }

    fn push_candidates(&mut self, k: usize) {
        let n = self.graph.n();
        for var in 0..n {
            for factor in [LinearFactor::var(var), LinearFactor::one_minus(var)] {
                let product = self.memory[k].poly.mul_linear(factor, &self.ctx);
                if product.is_zero() || product.degree() > self.degree_cap || self.known.contains(&product) {
                    continue;
                }
                self.candidates.push(Candidate {
                    action: Action {
                        memory_index: k,
                        factor,
                    },
                    product,
                });
            }
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn context(&self) -> &QuotientContext {
        &self.ctx
    }

    pub fn objective(&self) -> &Poly {
        &self.objective
    }

    pub fn memory(&self) -> &[MemoryEntry] {
        &self.memory
    }

    /// Edge monomials `x_i x_j`; identically zero in the quotient ring.
    pub fn equalities(&self) -> &[Poly] {
        &self.equalities
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Current certified bound `γ_t`.
    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    /// Optimal multipliers, one per memory entry.
    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    /// Number of unfiltered products, `2 n |M_t|`.
    pub fn raw_action_count(&self) -> usize {
        2 * self.graph.n() * self.memory.len()
    }

    /// Legal actions with their products, ordered by memory index, variable,
    /// then `x_i` before `1 - x_i`.
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn legal_actions(&self) -> Vec<Action> {
        self.candidates.iter().map(|c| c.action).collect()
    }

    /// Applies a legal action and returns the reward `γ_t - γ_{t+1}`.
    pub fn apply(&mut self, action: Action) -> Result<Rational, EnvError> {
        let pos = self
            .candidates
            .iter()
            .position(|c| c.action == action)
            .ok_or(EnvError::IllegalAction(action))?;
        let product = self.candidates[pos].product.clone();
        let col = column(&self.rows, &product);
        let sol = self.lp.extend_and_resolve(Rational::zero(), VarBound::NonNegative, col)?;
        let before = self.bound.clone();
        self.absorb(sol)?;
        self.candidates.retain(|c| c.product != product);
        self.known.insert(product.clone());
        self.memory.push(MemoryEntry {
            poly: product,
            provenance: Provenance::Derived {
                parent: action.memory_index,
                factor: action.factor,
            },
        });
        self.push_candidates(self.memory.len() - 1);
        self.step += 1;
        Ok(before - &self.bound)
    }

    /// Functional form of [`apply`](Self::apply).
    pub fn applied(&self, action: Action) -> Result<(ProverState, Rational), EnvError> {
        let mut next = self.clone();
        let r = next.apply(action)?;
        Ok((next, r))
    }

    /// Re-solves the bound LP from scratch over the current memory.
    pub fn bound_from_scratch(&self) -> Result<Rational, EnvError> {
        let mut lp = LinearProgram::new(self.rows.len());
        for (m, c) in self.objective.terms() {
            lp.rhs[self.rows[m]] = c.clone();
        }
        lp.add_var(Rational::one(), VarBound::Free, vec![(self.rows[&Monomial::one()], Rational::one())]);
        for e in &self.memory {
            lp.add_var(Rational::zero(), VarBound::NonNegative, column(&self.rows, &e.poly));
        }
        let sol = crate::lp::solve(&lp)?;
        sol.value.ok_or(EnvError::LpStatus(sol.status))
    }
}

/// Column of `-m` over the monomial rows.
fn column(rows: &HashMap<Monomial, usize>, poly: &Poly) -> SparseColumn<Rational> {
    poly.terms().map(|(m, c)| (rows[m], -c.clone())).collect()
}
