use rand::Rng as _;

use crate::env::{axiom_index, parse_proof_text, Action, Policy, Premise, ProofTrace, ProverState};
use crate::features::TripletClassTable;
use crate::poly::LinearFactor;
use crate::qnet::{ActionCache, QNetwork};
use crate::rng::Rng;
use crate::scalar::NetFloat;

/// The 10-step cycle proof of `α(C7) ≤ 3` in listing form.
pub const C7_REFERENCE_PROOF: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/c7_proof.txt"));

pub fn c7_reference_trace() -> ProofTrace {
    parse_proof_text(C7_REFERENCE_PROOF).expect("bundled proof parses")
}

/// Actions that re-derive the steps of `trace` in order from the initial
/// state; step `k` lands in memory slot `2n + k`.
pub fn actions_from_trace(trace: &ProofTrace) -> Vec<Action> {
    let n = trace.graph.n();
    trace
        .steps
        .iter()
        .map(|s| Action {
            memory_index: match s.parent {
                Premise::Axiom(f) => axiom_index(f),
                Premise::Step(j) => 2 * n + j,
            },
            factor: s.factor,
        })
        .collect()
}

/// Uniform legal action; `None` when there is none.
pub fn random_policy(state: &ProverState, rng: &mut Rng) -> Option<Action> {
    let c = state.candidates();
    (!c.is_empty()).then(|| c[rng.gen_range(0..c.len())].action)
}

/// Lowest index among the maximal values.
pub fn argmax<F: NetFloat>(q: &[F]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in q.iter().enumerate() {
        if best.is_none_or(|b| *v > q[b]) {
            best = Some(i);
        }
    }
    best
}

/// With probability `epsilon` a uniform legal action, otherwise the first
/// action of maximal `q` (given in candidate order).
pub fn epsilon_greedy<F: NetFloat>(state: &ProverState, q: &[F], epsilon: f64, rng: &mut Rng) -> Option<Action> {
    let c = state.candidates();
    if c.is_empty() {
        return None;
    }
    if rng.gen::<f64>() < epsilon {
        return Some(c[rng.gen_range(0..c.len())].action);
    }
    argmax(q).map(|i| c[i].action)
}

pub struct RandomPolicy {
    pub rng: Rng,
}

impl Policy for RandomPolicy {
    fn choose(&mut self, state: &ProverState) -> crate::Result<Option<Action>> {
        Ok(random_policy(state, &mut self.rng))
    }
}

/// Greedy with respect to a fixed network, using an [`ActionCache`].
pub struct GreedyPolicy<'a, F> {
    net: &'a QNetwork<F>,
    table: &'a TripletClassTable,
    cache: ActionCache<'a, F>,
}

impl<'a, F: NetFloat> GreedyPolicy<'a, F> {
    pub fn new(net: &'a QNetwork<F>, table: &'a TripletClassTable) -> Self {
        Self {
            net,
            table,
            cache: ActionCache::new(),
        }
    }
}

impl<F: NetFloat> Policy for GreedyPolicy<'_, F> {
    fn choose(&mut self, state: &ProverState) -> crate::Result<Option<Action>> {
        let q = self.cache.q_all_actions(self.net, self.table, state)?;
        Ok(argmax(&q).map(|i| state.candidates()[i].action))
    }
}

/// Replays a fixed action list, then stops.
pub struct ReplayPolicy {
    actions: Vec<Action>,
    pos: usize,
}

impl ReplayPolicy {
    pub fn new(actions: Vec<Action>) -> Self {
        Self { actions, pos: 0 }
    }
}

impl Policy for ReplayPolicy {
    fn choose(&mut self, _state: &ProverState) -> crate::Result<Option<Action>> {
        let a = self.actions.get(self.pos).copied();
        self.pos += 1;
        Ok(a)
    }
}

/// Grows cliques one vertex at a time: the running lemma
/// `1 - Σ_{v ∈ K} x_v` is multiplied by `1 - x_w` for the lowest uncovered
/// `w` adjacent to all of `K`; otherwise a new clique starts from
/// `(1 - x_v)(1 - x_w)`. On a complete graph this reaches bound 1 in `n - 1`
/// steps.
#[derive(Default)]
pub struct SequentialCliquePolicy {
    clique: Vec<usize>,
    covered: Vec<bool>,
}

impl SequentialCliquePolicy {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Policy for SequentialCliquePolicy {
    fn choose(&mut self, state: &ProverState) -> crate::Result<Option<Action>> {
        let g = state.graph();
        let n = g.n();
        if self.covered.len() != n {
            self.covered = vec![false; n];
        }
        let legal = |a: Action| state.candidates().iter().any(|c| c.action == a);
        let extend = (0..n).find(|&w| !self.covered[w] && self.clique.iter().all(|&v| g.has_edge(v, w)));
        if let (false, Some(w)) = (self.clique.len() < 2, extend) {
            let a = Action {
                memory_index: state.memory().len() - 1,
                factor: LinearFactor::one_minus(w),
            };
            if legal(a) {
                self.clique.push(w);
                self.covered[w] = true;
                return Ok(Some(a));
            }
        }
        for v in (0..n).filter(|&v| !self.covered[v]) {
            if let Some(w) = (v + 1..n).find(|&w| !self.covered[w] && g.has_edge(v, w)) {
                let a = Action {
                    memory_index: axiom_index(LinearFactor::one_minus(v)),
                    factor: LinearFactor::one_minus(w),
                };
                if legal(a) {
                    self.clique = vec![v, w];
                    self.covered[v] = true;
                    self.covered[w] = true;
                    return Ok(Some(a));
                }
            }
        }
        Ok(None)
    }
}
