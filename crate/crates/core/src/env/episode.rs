use num_traits::Zero;

use super::trace::{extract_proof, ProofTrace};
use super::{Action, ProverState};
use crate::graphs::Graph;
use crate::scalar::Rational;

/// Chooses the next action; `None` ends the episode.
pub trait Policy {
    fn choose(&mut self, state: &ProverState) -> crate::Result<Option<Action>>;
}

impl<F> Policy for F
where
    F: FnMut(&ProverState) -> crate::Result<Option<Action>>,
{
    fn choose(&mut self, state: &ProverState) -> crate::Result<Option<Action>> {
        self(state)
    }
}

#[derive(Clone, Debug)]
pub struct EpisodeOutcome {
    pub state: ProverState,
    pub trace: ProofTrace,
    pub rewards: Vec<Rational>,
    /// `γ_0, γ_1, ..`, one more entry than `rewards`.
    pub bounds: Vec<Rational>,
}

impl EpisodeOutcome {
    pub fn total_reward(&self) -> Rational {
        self.rewards.iter().fold(Rational::zero(), |acc, r| acc + r)
    }
}

/// Runs until `max_steps`, no legal action remains, or the policy stops.
pub fn run_episode<P: Policy + ?Sized>(
    graph: &Graph,
    policy: &mut P,
    degree_cap: usize,
    max_steps: usize,
) -> crate::Result<EpisodeOutcome> {
    let state = ProverState::init(graph, degree_cap)?;
    continue_episode(state, policy, max_steps)
}

/// Same as [`run_episode`] from an arbitrary starting state.
pub fn continue_episode<P: Policy + ?Sized>(
    mut state: ProverState,
    policy: &mut P,
    max_steps: usize,
) -> crate::Result<EpisodeOutcome> {
    let mut rewards = Vec::new();
    let mut bounds = vec![state.bound().clone()];
    while rewards.len() < max_steps && !state.candidates().is_empty() {
        let Some(a) = policy.choose(&state)? else { break };
        rewards.push(state.apply(a)?);
        bounds.push(state.bound().clone());
    }
    let trace = extract_proof(&state);
    Ok(EpisodeOutcome {
        state,
        trace,
        rewards,
        bounds,
    })
}
