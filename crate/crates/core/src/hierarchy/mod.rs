//! Level-`l` static hierarchy LP for the stability number.
//!
//! ```text
//! min γ  s.t.  γ - f = Σ_{|α|+|β| ≤ l} λ_{α,β} x^α (1-x)^β   (in the quotient ring),  λ ≥ 0
//! ```

mod certificate;

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

pub use certificate::{verify_static_certificate, StaticCertificate, StaticTerm};

use crate::env::{axiom_index, Action, EnvError, ProverState};
use crate::graphs::Graph;
use crate::lp::{LinearProgram, LpError, LpStatus, Simplex, SolverOptions, VarBound};
use crate::poly::{LinearFactor, Monomial, QuotientContext};
use crate::scalar::Rational;
use crate::Poly;

/// Default cap on distinct generators.
pub const DEFAULT_GENERATOR_LIMIT: usize = 200_000;

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("{count} distinct generators exceed the limit of {limit}")]
    TooManyGenerators { count: usize, limit: usize },
    #[error("hierarchy LP ended {0:?}")]
    LpStatus(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `x^alpha (1 - x)^beta` together with its reduced form.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub alpha: Monomial,
    pub beta: Monomial,
    pub poly: Poly,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub level: usize,
    pub generators: Vec<Generator>,
    /// `(α, β)` pairs visited before reduction and deduplication.
    pub pairs_enumerated: usize,
}

/// Product `x^alpha (1 - x)^beta` reduced in `ctx`.
pub fn generator_poly(alpha: &Monomial, beta: &Monomial, ctx: &QuotientContext) -> Poly {
    let mut p = if ctx.is_reduced(alpha) {
        Poly::monomial(alpha.clone(), Rational::one())
    } else {
        return Poly::zero();
    };
    for j in beta.vars() {
        p = p.mul_linear(LinearFactor::one_minus(j), ctx);
        if p.is_zero() {
            break;
        }
    }
    p
}

fn subsets(n: usize, max_size: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        visit(cur);
        if left == 0 {
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, left - 1, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, max_size, &mut Vec::new(), &mut visit);
}

/// Distinct nonzero reduced generators with `|α| + |β| ≤ level`, in order of
/// first appearance by support size, support, then `α`.
pub fn enumerate_generators(ctx: &QuotientContext, level: usize, limit: usize) -> Result<GeneratorSet, HierarchyError> {
    let mut supports: Vec<Vec<usize>> = Vec::new();
    subsets(ctx.n(), level, |s| supports.push(s.to_vec()));
    supports.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut seen: HashMap<Poly, ()> = HashMap::new();
    let mut generators = Vec::new();
    let mut pairs = 0;
    for s in &supports {
        for mask in 0u32..(1 << s.len()) {
            pairs += 1;
            let alpha = Monomial::from_vars(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
            let beta = Monomial::from_vars(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| v));
            let poly = generator_poly(&alpha, &beta, ctx);
            if poly.is_zero() || seen.contains_key(&poly) {
                continue;
            }
            seen.insert(poly.clone(), ());
            generators.push(Generator { alpha, beta, poly });
            if generators.len() > limit {
                return Err(HierarchyError::TooManyGenerators {
                    count: generators.len(),
                    limit,
                });
            }
        }
    }
    Ok(GeneratorSet {
        level,
        generators,
        pairs_enumerated: pairs,
    })
}

/// Size of a solved hierarchy LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpSize {
    /// `(α, β)` pairs before reduction.
    pub pairs: usize,
    /// Distinct reduced generators, i.e. nonnegative columns.
    pub columns: usize,
    /// Equality constraints, one per reduced monomial.
    pub rows: usize,
}

#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub bound: Rational,
    pub certificate: StaticCertificate,
    pub size: LpSize,
    pub pivots: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct LevelOptions {
    pub generator_limit: usize,
    pub pivot_limit: u64,
}

impl Default for LevelOptions {
    fn default() -> Self {
        Self {
            generator_limit: DEFAULT_GENERATOR_LIMIT,
            pivot_limit: SolverOptions::default().pivot_limit,
        }
    }
}

/// Exact level-`level` bound on `α(g)` with a certificate.
pub fn solve_level(graph: &Graph, level: usize) -> Result<LevelSolution, HierarchyError> {
    solve_level_with(graph, level, LevelOptions::default())
}

pub fn solve_level_with(graph: &Graph, level: usize, options: LevelOptions) -> Result<LevelSolution, HierarchyError> {
    let ctx = graph.context();
    let objective = Poly::sum_of_vars(graph.n());
    let set = enumerate_generators(&ctx, level, options.generator_limit)?;
    let rows: HashMap<Monomial, usize> = ctx
        .reduced_monomials(level.max(1))
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut lp = LinearProgram::new(rows.len());
    for (m, c) in objective.terms() {
        lp.rhs[rows[m]] = c.clone();
    }
    lp.add_var(Rational::one(), VarBound::Free, vec![(rows[&Monomial::one()], Rational::one())]);
    for g in &set.generators {
        lp.add_var(
            Rational::zero(),
            VarBound::NonNegative,
            g.poly.terms().map(|(m, c)| (rows[m], -c.clone())).collect(),
        );
    }
    let mut simplex = Simplex::new(
        &lp,
        SolverOptions {
            pivot_limit: options.pivot_limit,
        },
    )?;
    let sol = simplex.solve()?;
    let bound = match (sol.status, sol.value) {
        (LpStatus::Optimal, Some(v)) => v,
        (s, _) => return Err(HierarchyError::LpStatus(s)),
    };
    let terms = set
        .generators
        .iter()
        .zip(&sol.primal[1..])
        .filter(|(_, l)| !l.is_zero())
        .map(|(g, l)| StaticTerm {
            alpha: g.alpha.clone(),
            beta: g.beta.clone(),
            lambda: l.clone(),
        })
        .collect();
    Ok(LevelSolution {
        certificate: StaticCertificate {
            graph: graph.clone(),
            level,
            objective,
            terms,
            claimed_bound: bound.clone(),
        },
        bound,
        size: LpSize {
            pairs: set.pairs_enumerated,
            columns: set.generators.len(),
            rows: rows.len(),
        },
        pivots: simplex.pivots(),
    })
}

/// Whether `bound ≥ n / level`, which every exact level optimum satisfies.
pub fn check_lower_bound_theorem(graph: &Graph, level: usize, bound: &Rational) -> bool {
    if level == 0 {
        return true;
    }
    bound * Rational::from_integer(level.into()) >= Rational::from_integer(graph.n().into())
}

/// Adds every degree-two generator `ℓ_1 ℓ_2` to the prover's memory as a
/// one-step derivation, skipping zero and duplicate products. Returns the
/// number of lemmas added.
pub fn seed_level_two(state: &mut ProverState) -> Result<usize, EnvError> {
    let n = state.graph().n();
    let mut added = 0;
    for i in 0..n {
        for j in i + 1..n {
            for fi in [LinearFactor::var(i), LinearFactor::one_minus(i)] {
                for fj in [LinearFactor::var(j), LinearFactor::one_minus(j)] {
                    let action = Action {
                        memory_index: axiom_index(fi),
                        factor: fj,
                    };
                    if state.candidates().iter().any(|c| c.action == action) {
                        state.apply(action)?;
                        added += 1;
                    }
                }
            }
        }
    }
    Ok(added)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn polys(set: &GeneratorSet) -> Vec<String> {
        let mut v: Vec<String> = set.generators.iter().map(|g| crate::poly::text::to_infix(&g.poly)).collect();
        v.sort();
        v
    }

    #[test]
    fn level_one_no_edges() {
        let set = enumerate_generators(&QuotientContext::hypercube(2), 1, 100).unwrap();
        assert_eq!(polys(&set), ["-x1 + 1", "-x2 + 1", "1", "x1", "x2"]);
    }

    #[test]
    fn edge_pair_absent() {
        let g = Graph::complete(2);
        let set = enumerate_generators(&g.context(), 2, 100).unwrap();
        assert!(set.generators.iter().all(|g| !g.alpha.contains(0) || !g.alpha.contains(1)));
        // x1 (1 - x2) = x1 duplicates x1
        assert!(polys(&set).contains(&"-x1 - x2 + 1".to_string()));
        assert_eq!(set.generators.len(), 6);
    }

    #[test]
    fn budget() {
        let err = enumerate_generators(&QuotientContext::hypercube(6), 3, 10).unwrap_err();
        assert!(matches!(err, HierarchyError::TooManyGenerators { limit: 10, .. }));
    }

    #[test]
    fn complete_graph_levels() {
        for n in [4, 6] {
            let g = Graph::complete(n);
            assert_eq!(solve_level(&g, 2).unwrap().bound, rat(n as i64, 2));
            assert_eq!(solve_level(&g, n).unwrap().bound, rat(1, 1));
        }
    }

    #[test]
    fn lower_bound_theorem() {
        let g = Graph::empty(15);
        assert!(check_lower_bound_theorem(&g, 2, &rat(15, 2)));
        assert!(!check_lower_bound_theorem(&g, 2, &rat(7, 1)));
        assert!(check_lower_bound_theorem(&g, 3, &rat(501, 100)));
    }
}
