use dynproof::agent::{RandomPolicy, SequentialCliquePolicy};
use dynproof::env::{run_episode, verify, ProverState};
use dynproof::graphs::{max_stable_set, Graph};
use dynproof::hierarchy::{check_lower_bound_theorem, seed_level_two, solve_level, verify_static_certificate};
use dynproof::rng::stream;
use dynproof::scalar::{rat, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn stable_points(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    (0u32..1 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|x| g.edges().all(|(a, b)| !(x[a] && x[b])))
        .collect()
}

fn graph() -> impl Strategy<Value = Graph> {
    (4usize..9, 0.2f64..0.9, any::<u64>()).prop_map(|(n, p, seed)| Graph::random_gnp(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_episodes_are_sound_and_monotone(g in graph(), seed in any::<u64>()) {
        let alpha = rat(max_stable_set(&g).unwrap().0 as i64, 1);
        let mut policy = RandomPolicy { rng: stream(seed, "agent") };
        let out = run_episode(&g, &mut policy, 2, 15).unwrap();
        prop_assert_eq!(&out.bounds[0], &rat(g.n() as i64, 1));
        for w in out.bounds.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for b in &out.bounds {
            prop_assert!(*b >= alpha);
        }
        // Rewards telescope to the total improvement.
        let last = out.bounds.last().unwrap();
        prop_assert_eq!(out.total_reward(), &out.bounds[0] - last);
        for (r, w) in out.rewards.iter().zip(out.bounds.windows(2)) {
            prop_assert_eq!(r, &(&w[0] - &w[1]));
            prop_assert!(!r.is_negative());
        }
        // Every lemma in memory is nonnegative on every stable set.
        let points = stable_points(&g);
        for m in out.state.memory() {
            for x in &points {
                prop_assert!(!m.poly.eval_boolean(x).is_negative());
            }
        }
        let report = verify(&out.trace).unwrap();
        prop_assert_eq!(&report.bound, out.state.bound());
        prop_assert_eq!(&out.state.bound_from_scratch().unwrap(), out.state.bound());
    }

    #[test]
    fn static_levels_are_sound_monotone_and_certified(g in graph()) {
        let alpha = rat(max_stable_set(&g).unwrap().0 as i64, 1);
        let mut prev: Option<Rational> = None;
        for level in 1..=3 {
            let sol = solve_level(&g, level).unwrap();
            let report = verify_static_certificate(&sol.certificate).unwrap();
            prop_assert_eq!(&report.bound, &sol.bound);
            prop_assert!(sol.bound >= alpha);
            prop_assert!(check_lower_bound_theorem(&g, level, &sol.bound));
            if let Some(p) = &prev {
                prop_assert!(sol.bound <= *p);
            }
            prev = Some(sol.bound);
        }
    }

    #[test]
    fn seeded_memory_reproduces_level_two(g in graph()) {
        let mut state = ProverState::init(&g, 2).unwrap();
        seed_level_two(&mut state).unwrap();
        prop_assert_eq!(state.bound(), &solve_level(&g, 2).unwrap().bound);
    }
}

#[test]
fn complete_graphs_need_n_minus_one_steps() {
    for n in 3..=10 {
        let g = Graph::complete(n);
        let out = run_episode(&g, &mut SequentialCliquePolicy::new(), 2, 100).unwrap();
        assert_eq!(out.state.bound(), &rat(1, 1), "K{n}");
        let first_one = out.bounds.iter().position(|b| *b == rat(1, 1)).unwrap();
        assert_eq!(first_one, n - 1, "K{n}");
        assert!(out.state.memory().iter().all(|m| m.poly.degree() <= 2));
        verify(&out.trace).unwrap();
    }
}

#[test]
fn relabeled_graphs_get_the_same_static_bound() {
    let g = Graph::random_gnp(8, 0.4, 11);
    let perm = [3, 7, 1, 0, 6, 2, 5, 4];
    for level in 1..=3 {
        assert_eq!(solve_level(&g, level).unwrap().bound, solve_level(&g.permute(&perm), level).unwrap().bound);
    }
}

#[test]
fn reward_of_an_unhelpful_step_is_zero() {
    let g = Graph::empty(3);
    let mut state = ProverState::init(&g, 2).unwrap();
    let a = state.legal_actions()[0];
    let r = state.apply(a).unwrap();
    assert!(r.is_zero());
    assert_eq!(state.bound(), &rat(3, 1));
}
