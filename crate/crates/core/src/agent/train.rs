use std::sync::Arc;

use rand::Rng as _;

use super::config::TrainConfig;
use super::policy::epsilon_greedy;
use super::replay::{ReplayBuffer, Transition};
use crate::env::ProverState;
use crate::features::TripletClassTable;
use crate::graphs::Graph;
use crate::qnet::{ActionCache, QNetwork, RmsProp};
use crate::rng::stream;
use crate::scalar::{NetFloat, Rational, Scalar};

pub const LOG_HEADER: &str = "# dynproof-train-log v1\nstep,episode,n,p,graph_seed,episode_steps,final_bound,loss_avg\n";

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeLog {
    /// Global step count at the end of the episode.
    pub step: usize,
    pub episode: usize,
    pub n: usize,
    pub p: f64,
    pub graph_seed: u64,
    pub episode_steps: usize,
    pub final_bound: Rational,
    /// Mean batch ℓ1 loss over the episode's updates (0 before learning starts).
    pub loss_avg: f64,
}

impl EpisodeLog {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}\n",
            self.step,
            self.episode,
            self.n,
            self.p,
            self.graph_seed,
            self.episode_steps,
            self.final_bound.to_f64_lossy(),
            self.loss_avg
        )
    }
}

pub struct TrainOutcome<F> {
    pub net: QNetwork<F>,
    pub episodes: Vec<EpisodeLog>,
    /// Smallest stored reward, as a float.
    pub min_reward: f64,
}

/// DQN with a replay buffer and ℓ1 TD loss.
///
/// Each episode draws `n` and `p` uniformly from the configured ranges and
/// a fresh `G(n, p)` graph. Actions are chosen ε-greedily by a snapshot of
/// the network taken at the start of the episode, which keeps its action
/// cache valid for the whole episode. The TD target of a transition uses
/// `max_a' q(s', a')` as computed by that snapshot when acting in `s'`.
pub fn train<F: NetFloat>(
    config: &TrainConfig,
    table: &TripletClassTable,
    mut on_episode: impl FnMut(&EpisodeLog),
) -> crate::Result<TrainOutcome<F>> {
    config.validate()?;
    let c = |v: f64| F::from_f64(v).unwrap();
    let mut net = QNetwork::<F>::new(table.len(), config.width, &table.fingerprint(), &mut stream(config.seed, "init"));
    let mut opt = RmsProp::new(&net, c(config.lr), c(config.decay), c(config.rms_eps));
    let mut graph_rng = stream(config.seed, "graph");
    let mut agent_rng = stream(config.seed, "agent");
    let mut replay_rng = stream(config.seed, "replay");
    let mut buffer: ReplayBuffer<Transition<F>> = ReplayBuffer::new(config.replay_capacity);
    let mut episodes = Vec::new();
    let mut min_reward = f64::INFINITY;
    let mut step = 0;
    let mut grads = net.params().zeros_like();
    while step < config.total_steps {
        let n = graph_rng.gen_range(config.n_min..=config.n_max);
        let p = graph_rng.gen_range(config.p_min..=config.p_max);
        let graph_seed: u64 = graph_rng.gen();
        let graph = Arc::new(Graph::random_gnp(n, p, graph_seed));
        let mut state = ProverState::init(&graph, config.degree_cap)?;
        let acting = net.clone();
        let mut cache = ActionCache::new();
        let mut pending: Option<Transition<F>> = None;
        let mut history = Vec::new();
        let (mut loss_sum, mut updates) = (0.0, 0usize);
        while history.len() < config.horizon && step < config.total_steps && !state.candidates().is_empty() {
            let q = cache.q_all_actions(&acting, table, &state)?;
            if let Some(mut t) = pending.take() {
                t.next_value = q.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.to_f64().unwrap()));
                buffer.push(t);
            }
            let action = epsilon_greedy(&state, &q, config.epsilon, &mut agent_rng).expect("legal actions exist");
            let input = cache.features_for(table, &state, action)?;
            let reward = state.apply(action)?.to_f64_lossy();
            min_reward = min_reward.min(reward);
            pending = Some(Transition {
                graph: graph.clone(),
                degree_cap: config.degree_cap,
                history: history.clone(),
                action,
                reward,
                next_value: 0.0,
                terminal: false,
                input,
            });
            history.push(action);
            step += 1;
            if buffer.len() >= config.batch.min(config.replay_capacity) {
                grads.fill_zero();
                let batch = buffer.sample(&mut replay_rng, config.batch);
                let scale = 1.0 / batch.len() as f64;
                let mut loss = 0.0;
                for t in batch {
                    let fwd = net.forward(&t.input)?;
                    let diff = fwd.q.to_f64().unwrap() - t.target(config.discount);
                    loss += diff.abs() * scale;
                    let sign = if diff > 0.0 {
                        1.0
                    } else if diff < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    if sign != 0.0 {
                        net.backward(&t.input, &fwd, c(sign * scale), &mut grads);
                    }
                }
                opt.step(&mut net, &grads)?;
                loss_sum += loss;
                updates += 1;
            }
        }
        if let Some(mut t) = pending.take() {
            t.terminal = true;
            buffer.push(t);
        }
        let log = EpisodeLog {
            step,
            episode: episodes.len(),
            n,
            p,
            graph_seed,
            episode_steps: history.len(),
            final_bound: state.bound().clone(),
            loss_avg: if updates == 0 { 0.0 } else { loss_sum / updates as f64 },
        };
        on_episode(&log);
        episodes.push(log);
    }
    Ok(TrainOutcome {
        net,
        episodes,
        min_reward,
    })
}
