use dynproof::agent::random_policy;
use dynproof::env::{Action, ProverState};
use dynproof::features::{build_class_table, Featurizer, TripletClassTable};
use dynproof::graphs::Graph;
use dynproof::poly::Monomial;
use dynproof::qnet::{features_for, q_all_actions_uncached, q_value, ActionCache, Params, QNetwork, StateActionInput};
use dynproof::rng::{stream, Rng};
use dynproof::{Poly, QNetwork32, QNetwork64};
use rand::seq::SliceRandom;
use rand::Rng as _;

fn table() -> TripletClassTable {
    build_class_table(2).unwrap()
}

fn random_state(n: usize, steps: usize, rng: &mut Rng) -> ProverState {
    let g = Graph::random_gnp(n, rng.gen_range(0.2..0.8), rng.gen());
    let mut s = ProverState::init(&g, 2).unwrap();
    for _ in 0..steps {
        match random_policy(&s, rng) {
            Some(a) => {
                s.apply(a).unwrap();
            }
            None => break,
        }
    }
    s
}

/// Replays the derivation of `s` on the relabeled graph.
fn relabeled_state(s: &ProverState, perm: &[usize]) -> ProverState {
    let mut t = ProverState::init(&s.graph().permute(perm), s.degree_cap()).unwrap();
    let n = s.graph().n();
    for m in &s.memory()[2 * n..] {
        if let dynproof::env::Provenance::Derived { parent, factor } = m.provenance {
            t.apply(
                Action {
                    memory_index: parent,
                    factor,
                }
                .relabel(perm),
            )
            .unwrap();
        }
    }
    t
}

fn shuffled(input: &StateActionInput<f64>, rng: &mut Rng) -> StateActionInput<f64> {
    let mut out = input.clone();
    out.mem.shuffle(rng);
    out.eq.shuffle(rng);
    out
}

#[test]
fn q_is_invariant_under_relabeling_and_reordering() {
    let table = table();
    let mut rng = stream(1, "symmetry");
    let net = QNetwork64::new(table.len(), 16, &table.fingerprint(), &mut stream(1, "init"));
    for _ in 0..25 {
        let n = rng.gen_range(4..9);
        let s = random_state(n, rng.gen_range(0..8), &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let t = relabeled_state(&s, &perm);
        assert_eq!(t.bound(), s.bound());
        let a = *s.legal_actions().choose(&mut rng).unwrap();
        let q = q_value(&net, &table, &s, a).unwrap();
        let q_perm = q_value(&net, &table, &t, a.relabel(&perm)).unwrap();
        assert_eq!(q.to_bits(), q_perm.to_bits());
        let input = features_for::<f64>(&table, &s, a).unwrap();
        let q_shuffled = net.forward(&shuffled(&input, &mut rng)).unwrap().q;
        assert_eq!(q.to_bits(), q_shuffled.to_bits());
    }
}

#[test]
fn features_are_invariant_and_trilinear() {
    let table = table();
    let mut rng = stream(2, "features");
    let random_poly = |rng: &mut Rng, max_deg: usize| -> Poly {
        let mut p = Poly::zero();
        for _ in 0..rng.gen_range(1..5) {
            let d = rng.gen_range(0..=max_deg);
            let mut vars: Vec<usize> = (0..7).collect();
            vars.shuffle(rng);
            let term = Poly::monomial(Monomial::from_vars(vars[..d].iter().copied()), dynproof::scalar::rat(rng.gen_range(-4..5), rng.gen_range(1..4)));
            p = p.add(&term);
        }
        p
    };
    for _ in 0..40 {
        let (m1, m2, f, a1, a2) = (
            random_poly(&mut rng, 2),
            random_poly(&mut rng, 2),
            random_poly(&mut rng, 2),
            random_poly(&mut rng, 2),
            random_poly(&mut rng, 2),
        );
        let z = |m: &Poly, f: &Poly, a: &Poly| table.featurize(m, f, a).unwrap();
        let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(u, v)| (u - v).abs() <= 1e-9 * (1.0 + u.abs()));
        let sum_m: Vec<f64> = z(&m1, &f, &a1).iter().zip(z(&m2, &f, &a1)).map(|(u, v)| u + v).collect();
        assert!(close(&z(&m1.add(&m2), &f, &a1), &sum_m));
        let sum_a: Vec<f64> = z(&m1, &f, &a1).iter().zip(z(&m1, &f, &a2)).map(|(u, v)| u + v).collect();
        assert!(close(&z(&m1, &f, &a1.add(&a2)), &sum_a));
        let sum_f: Vec<f64> = z(&m1, &f, &a1).iter().zip(z(&m1, &m2, &a1)).map(|(u, v)| u + v).collect();
        assert!(close(&z(&m1, &f.add(&m2), &a1), &sum_f));
        let mut perm: Vec<usize> = (0..7).collect();
        perm.shuffle(&mut rng);
        let base = z(&m1, &f, &a1);
        let moved = z(&m1.permute(&perm), &f.permute(&perm), &a1.permute(&perm));
        assert_eq!(base.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), moved.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        let mut memo = Featurizer::new(&table, &f).unwrap();
        assert_eq!(memo.featurize(&m1, &a1).unwrap(), base);
    }
}

fn loss<F: dynproof::NetFloat>(net: &QNetwork<F>, input: &StateActionInput<F>) -> f64 {
    net.forward(input).unwrap().q.to_f64().unwrap()
}

/// Central differences against backprop on width-8 networks.
fn max_gradient_error(seed: u64) -> f64 {
    let table = table();
    let mut rng = stream(seed, "gradcheck");
    let s = random_state(rng.gen_range(4..8), rng.gen_range(1..6), &mut rng);
    let a = *s.legal_actions().choose(&mut rng).unwrap();
    let input = features_for::<f64>(&table, &s, a).unwrap();
    let mut net = QNetwork64::new(table.len(), 8, &table.fingerprint(), &mut stream(seed, "init"));
    // Push biases up so most ReLUs are active and kinks are rare.
    for i in 0..net.params().len() {
        let v = net.params().get(i);
        net.params_mut().set(i, v + 0.05);
    }
    let fwd = net.forward(&input).unwrap();
    let mut grads: Params<f64> = net.params().zeros_like();
    net.backward(&input, &fwd, 1.0, &mut grads);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for i in 0..net.params().len() {
        let orig = net.params().get(i);
        net.params_mut().set(i, orig + h);
        let up = loss(&net, &input);
        net.params_mut().set(i, orig - h);
        let down = loss(&net, &input);
        net.params_mut().set(i, orig);
        let numeric = (up - down) / (2.0 * h);
        let analytic = grads.get(i);
        let err = (numeric - analytic).abs() / (numeric.abs() + analytic.abs()).max(1e-6);
        worst = worst.max(err);
    }
    worst
}

#[test]
fn gradients_match_finite_differences() {
    for seed in 0..5 {
        let e = max_gradient_error(seed);
        assert!(e < 1e-4, "seed {seed}: relative error {e}");
    }
}

#[test]
fn cache_agrees_with_recomputation_over_episodes() {
    let table = table();
    let net = QNetwork64::new(table.len(), 12, &table.fingerprint(), &mut stream(3, "init"));
    let mut rng = stream(3, "cache");
    for _ in 0..3 {
        let g = Graph::random_gnp(7, 0.5, rng.gen());
        let mut s = ProverState::init(&g, 2).unwrap();
        let mut cache = ActionCache::new();
        for _ in 0..25 {
            let cached = cache.q_all_actions(&net, &table, &s).unwrap();
            let fresh = q_all_actions_uncached(&net, &table, &s).unwrap();
            assert_eq!(cached.len(), fresh.len());
            for (x, y) in cached.iter().zip(&fresh) {
                assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{x} vs {y}");
            }
            match random_policy(&s, &mut rng) {
                Some(a) => {
                    s.apply(a).unwrap();
                }
                None => break,
            }
        }
    }
}

#[test]
fn stale_cache_is_refused() {
    let table = table();
    let mut net = QNetwork64::new(table.len(), 4, &table.fingerprint(), &mut stream(4, "init"));
    let s = ProverState::init(&Graph::cycle(5), 2).unwrap();
    let mut cache = ActionCache::new();
    cache.q_all_actions(&net, &table, &s).unwrap();
    net.params_mut().scale(0.5);
    assert!(cache.q_all_actions(&net, &table, &s).is_err());
    let other = ProverState::init(&Graph::cycle(6), 2).unwrap();
    let fresh = QNetwork64::new(table.len(), 4, &table.fingerprint(), &mut stream(4, "init"));
    let mut cache = ActionCache::new();
    cache.q_all_actions(&fresh, &table, &s).unwrap();
    assert!(cache.q_all_actions(&fresh, &table, &other).is_err());
}

#[test]
fn single_precision_tracks_double() {
    let table = table();
    let net = QNetwork64::new(table.len(), 16, &table.fingerprint(), &mut stream(5, "init"));
    let net32: QNetwork32 = net.cast();
    let mut rng = stream(5, "f32");
    let s = random_state(6, 4, &mut rng);
    for a in s.legal_actions().into_iter().take(10) {
        let q64 = q_value(&net, &table, &s, a).unwrap();
        let q32 = q_value(&net32, &table, &s, a).unwrap() as f64;
        assert!((q64 - q32).abs() <= 1e-4 * (1.0 + q64.abs()));
    }
}
