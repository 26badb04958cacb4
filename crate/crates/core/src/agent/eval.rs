use super::policy::{GreedyPolicy, RandomPolicy, SequentialCliquePolicy};
use crate::env::{run_episode, verify, Policy, ProofTrace};
use crate::features::TripletClassTable;
use crate::graphs::Graph;
use crate::qnet::QNetwork;
use crate::rng::stream;
use crate::scalar::{NetFloat, Rational, Scalar};

pub enum EvalPolicy<'a, F> {
    /// Uniform legal actions; graph `i` uses stream `("eval", seed + i)`.
    Random,
    /// ε = 0 rollout of a fixed network.
    Greedy {
        net: &'a QNetwork<F>,
        table: &'a TripletClassTable,
    },
    Scripted,
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub bounds: Vec<Rational>,
    pub traces: Vec<ProofTrace>,
}

impl EvalReport {
    pub fn mean(&self) -> f64 {
        self.bounds.iter().map(|b| b.to_f64_lossy()).sum::<f64>() / self.bounds.len().max(1) as f64
    }
}

/// One episode per graph; every bound is checked by the verifier.
pub fn evaluate<F: NetFloat>(
    policy: &EvalPolicy<'_, F>,
    graphs: &[Graph],
    horizon: usize,
    degree_cap: usize,
    seed: u64,
) -> crate::Result<EvalReport> {
    let mut bounds = Vec::with_capacity(graphs.len());
    let mut traces = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let mut p: Box<dyn Policy + '_> = match policy {
            EvalPolicy::Random => Box::new(RandomPolicy {
                rng: stream(seed.wrapping_add(i as u64), "eval"),
            }),
            EvalPolicy::Greedy { net, table } => Box::new(GreedyPolicy::new(net, table)),
            EvalPolicy::Scripted => Box::new(SequentialCliquePolicy::new()),
        };
        let out = run_episode(g, p.as_mut(), degree_cap, horizon)?;
        let report = verify(&out.trace)?;
        bounds.push(report.bound);
        traces.push(out.trace);
    }
    Ok(EvalReport { bounds, traces })
}
