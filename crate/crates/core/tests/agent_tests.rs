use std::collections::HashSet;
use std::sync::Arc;

use dynproof::agent::{evaluate, random_policy, train, EvalPolicy, ReplayBuffer, TrainConfig, Transition, LOG_HEADER};
use dynproof::env::ProverState;
use dynproof::features::build_class_table;
use dynproof::graphs::Graph;
use dynproof::qnet::features_for;
use dynproof::rng::stream;
use dynproof::{QNetwork64, Scalar};

fn tiny_config(seed: u64) -> TrainConfig {
    let mut c = TrainConfig::default();
    c.total_steps = 120;
    c.width = 6;
    c.n_min = 5;
    c.n_max = 6;
    c.horizon = 30;
    c.batch = 8;
    c.replay_capacity = 20;
    c.lr = 1e-3;
    c.seed = seed;
    c
}

#[test]
fn transitions_replay_to_the_recorded_state() {
    let table = build_class_table(2).unwrap();
    let graph = Arc::new(Graph::random_gnp(7, 0.5, 9));
    let mut state = ProverState::init(&graph, 2).unwrap();
    let mut rng = stream(9, "agent");
    let mut history = Vec::new();
    let mut stored = Vec::new();
    while let Some(action) = random_policy(&state, &mut rng) {
        if history.len() == 12 {
            break;
        }
        let input = features_for::<f64>(&table, &state, action).unwrap();
        let before = state.bound().clone();
        let reward = state.apply(action).unwrap();
        stored.push((
            Transition {
                graph: graph.clone(),
                degree_cap: 2,
                history: history.clone(),
                action,
                reward: reward.to_f64_lossy(),
                next_value: 0.0,
                terminal: false,
                input,
            },
            before,
            reward,
        ));
        history.push(action);
    }
    for (t, before, reward) in &stored {
        let s = t.state().unwrap();
        assert_eq!(s.bound(), before);
        assert_eq!(&t.exact_reward().unwrap(), reward);
        assert_eq!(features_for::<f64>(&table, &s, t.action).unwrap(), t.input);
    }
}

#[test]
fn replay_buffer_is_fifo_and_samples_without_repeats() {
    let mut buf = ReplayBuffer::new(5);
    for i in 0..8 {
        buf.push(i);
    }
    assert_eq!(buf.iter().copied().collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
    let mut rng = stream(0, "replay");
    let s = buf.sample(&mut rng, 4);
    assert_eq!(s.len(), 4);
    assert_eq!(s.iter().collect::<HashSet<_>>().len(), 4);
    assert_eq!(buf.sample(&mut rng, 10).len(), 5);
}

#[test]
fn training_is_deterministic_per_seed() {
    let table = build_class_table(2).unwrap();
    let a = train::<f64>(&tiny_config(3), &table, |_| {}).unwrap();
    let b = train::<f64>(&tiny_config(3), &table, |_| {}).unwrap();
    let c = train::<f64>(&tiny_config(4), &table, |_| {}).unwrap();
    assert_eq!(a.net.params(), b.net.params());
    assert_eq!(
        a.episodes.iter().map(|e| e.csv_row()).collect::<Vec<_>>(),
        b.episodes.iter().map(|e| e.csv_row()).collect::<Vec<_>>()
    );
    assert_ne!(a.net.params(), c.net.params());
}

#[test]
fn smoke_training_produces_a_usable_model() {
    let table = build_class_table(2).unwrap();
    let config = tiny_config(1);
    let mut rows = String::from(LOG_HEADER);
    let out = train::<f64>(&config, &table, |e| rows.push_str(&e.csv_row())).unwrap();
    out.net.check_finite().unwrap();
    assert!(out.min_reward >= 0.0);
    let steps: usize = out.episodes.iter().map(|e| e.episode_steps).sum();
    assert_eq!(steps, config.total_steps);
    assert_eq!(rows.lines().count(), 2 + out.episodes.len());

    let mut bytes = Vec::new();
    out.net.write_to(&mut bytes, &config.to_map()).unwrap();
    let (back, header) = QNetwork64::read_from(bytes.as_slice(), Some(&table.fingerprint())).unwrap();
    assert_eq!(back.params(), out.net.params());
    assert_eq!(header.hyperparameters, config.to_map());

    let graphs: Vec<Graph> = (0..3).map(|i| Graph::random_gnp(6, 0.5, i)).collect();
    let report = evaluate(&EvalPolicy::Greedy { net: &back, table: &table }, &graphs, 20, 2, 0).unwrap();
    assert_eq!(report.bounds.len(), 3);
}

#[test]
fn single_precision_training_runs() {
    let table = build_class_table(2).unwrap();
    let out = train::<f32>(&tiny_config(2), &table, |_| {}).unwrap();
    out.net.check_finite().unwrap();
}

#[test]
fn config_text_round_trips() {
    let mut c = TrainConfig::default();
    c.lr = 3e-4;
    c.n_min = 10;
    c.n_max = 15;
    c.width = 32;
    let back = TrainConfig::parse(&c.to_text()).unwrap();
    assert_eq!(back, c);
    assert!(TrainConfig::parse("no_such_key = 1").is_err());
    assert!(TrainConfig::parse("n_min = 9\nn_max = 3").is_err());
}
