use std::collections::BTreeSet;

use dynproof::env::{parse_proof_text, render_proof, verify, Premise, ProofTrace, VerifyError};
use dynproof::graphs::{max_stable_set, Graph};
use dynproof::scalar::rat;

const C7: &str = include_str!("fixtures/c7_proof.txt");
const K7: &str = include_str!("fixtures/k7_proof.txt");
const PETERSEN: &str = include_str!("fixtures/petersen_proof.txt");

fn parse(text: &str) -> ProofTrace {
    parse_proof_text(text).unwrap()
}

#[test]
fn fixtures_verify() {
    for (text, bound, steps) in [(C7, rat(3, 1), 10), (K7, rat(1, 1), 6), (PETERSEN, rat(4, 1), 42)] {
        let trace = parse(text);
        let report = verify(&trace).unwrap();
        assert_eq!(report.bound, bound);
        assert_eq!(report.steps, steps);
    }
}

#[test]
fn fixture_graphs_have_the_claimed_alpha() {
    for text in [C7, K7, PETERSEN] {
        let trace = parse(text);
        let (alpha, _) = max_stable_set(&trace.graph).unwrap();
        assert_eq!(rat(alpha as i64, 1), trace.claimed_bound);
    }
}

#[test]
fn petersen_fixture_is_the_petersen_graph() {
    let g = parse(PETERSEN).graph;
    assert_eq!(g.n(), 10);
    assert_eq!(g.num_edges(), 15);
    assert!((0..10).all(|v| g.degree(v) == 3));
    // Girth 5: no triangles and no 4-cycles.
    for a in 0..10 {
        for b in 0..10 {
            if a == b {
                continue;
            }
            let common = (0..10).filter(|&c| g.has_edge(a, c) && g.has_edge(b, c)).count();
            assert_eq!(common, usize::from(!g.has_edge(a, b)));
        }
    }
}

#[test]
fn petersen_multipliers_are_fifths() {
    let trace = parse(PETERSEN);
    let lambdas: BTreeSet<_> = trace.combination.iter().map(|(_, l)| l.clone()).collect();
    let allowed: BTreeSet<_> = [rat(1, 5), rat(2, 5), rat(3, 5)].into_iter().collect();
    assert!(lambdas.is_subset(&allowed), "{lambdas:?}");
}

#[test]
fn render_parse_round_trip_is_byte_exact() {
    for text in [C7, K7, PETERSEN] {
        let trace = parse(text);
        assert_eq!(render_proof(&trace), text);
    }
}

#[test]
fn json_round_trip() {
    for text in [C7, K7, PETERSEN] {
        let trace = parse(text);
        let back = ProofTrace::from_json(&trace.to_json()).unwrap();
        assert_eq!(back, trace);
        verify(&back).unwrap();
    }
}

#[test]
fn negative_multiplier_is_rejected() {
    let mut trace = parse(C7);
    trace.combination[0].1 = rat(-1, 1);
    assert!(matches!(verify(&trace), Err(VerifyError::NegativeLambda { .. })));
}

#[test]
fn negative_multiplier_fixture_is_rejected() {
    let trace = parse(include_str!("fixtures/c7_negative_lambda.txt"));
    assert!(matches!(verify(&trace), Err(VerifyError::NegativeLambda { index: 0, .. })));
}

#[test]
fn understated_bound_is_rejected() {
    let mut trace = parse(C7);
    trace.claimed_bound = rat(5, 2);
    assert!(matches!(verify(&trace), Err(VerifyError::IdentityMismatch { .. })));
}

#[test]
fn altered_step_is_rejected() {
    let mut trace = parse(K7);
    let other = trace.steps[1].poly.clone();
    trace.steps[0].poly = other;
    assert!(verify(&trace).is_err());
}

#[test]
fn forward_reference_is_rejected() {
    let mut trace = parse(C7);
    trace.steps[0].parent = Premise::Step(3);
    assert!(verify(&trace).is_err());
}

#[test]
fn proof_for_another_graph_is_rejected() {
    let mut trace = parse(C7);
    trace.graph = Graph::cycle(7).permute(&[1, 0, 2, 3, 4, 5, 6]);
    assert!(verify(&trace).is_err());
}
