//! DQN training, evaluation, and baseline policies.

mod config;
mod eval;
mod policy;
mod replay;
mod train;

pub use config::TrainConfig;
pub use eval::{evaluate, EvalPolicy, EvalReport};
pub use policy::{
    actions_from_trace, argmax, c7_reference_trace, epsilon_greedy, random_policy, GreedyPolicy, RandomPolicy, ReplayPolicy,
    SequentialCliquePolicy, C7_REFERENCE_PROOF,
};
pub use replay::{ReplayBuffer, Transition};
pub use train::{train, EpisodeLog, TrainOutcome, LOG_HEADER};
