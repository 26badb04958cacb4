use dynproof::graphs::Graph;
use dynproof::poly::text::{from_machine, parse_reduced, to_infix, to_machine};
use dynproof::poly::{reduce, LinearFactor, Polynomial, QuotientContext, RawMonomial, RawPolynomial};
use dynproof::scalar::{rat, Rational};
use dynproof::Poly;
use proptest::prelude::*;

const N: usize = 6;

fn graph_from_mask(mask: u16) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..N).flat_map(|i| (i + 1..N).map(move |j| (i, j))).collect();
    Graph::new(N, pairs.into_iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e)).unwrap()
}

fn raw_poly() -> impl Strategy<Value = RawPolynomial<Rational>> {
    let mono = prop::collection::vec((0..N, 1u32..4), 0..4);
    prop::collection::vec((mono, -6i64..7), 0..7)
        .prop_map(|terms| RawPolynomial::from_terms(terms.into_iter().map(|(m, c)| (m, rat(c, 1)))))
}

fn stable_points(g: &Graph) -> Vec<Vec<bool>> {
    (0u32..1 << N)
        .map(|bits| (0..N).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|x| g.edges().all(|(a, b)| !(x[a] && x[b])))
        .collect()
}

fn as_rationals(x: &[bool]) -> Vec<Rational> {
    x.iter().map(|&b| rat(b as i64, 1)).collect()
}

fn permute_raw(p: &RawPolynomial<Rational>, perm: &[usize]) -> RawPolynomial<Rational> {
    RawPolynomial::from_terms(p.terms().iter().map(|(m, c)| {
        let m: RawMonomial = m.iter().map(|&(v, e)| (perm[v], e)).collect();
        (m, c.clone())
    }))
}

fn reduced(p: &RawPolynomial<Rational>, ctx: &QuotientContext) -> Poly {
    reduce(p, ctx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reduction_preserves_values_on_stable_sets(mask in any::<u16>(), p in raw_poly()) {
        let g = graph_from_mask(mask);
        let ctx = g.context();
        let r = reduced(&p, &ctx);
        for x in stable_points(&g) {
            prop_assert_eq!(r.eval_boolean(&x), p.eval(&as_rationals(&x)));
        }
        for m in r.monomials() {
            prop_assert!(ctx.is_reduced(m));
        }
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(mask in any::<u16>(), p in raw_poly(), q in raw_poly()) {
        let ctx = graph_from_mask(mask).context();
        let (rp, rq) = (reduced(&p, &ctx), reduced(&q, &ctx));
        prop_assert_eq!(reduced(&p.add(&q), &ctx), rp.add(&rq));
        prop_assert_eq!(reduced(&p.mul(&q), &ctx), rp.mul(&rq, &ctx));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(mask in any::<u16>(), p in raw_poly(), q in raw_poly(), s in raw_poly()) {
        let ctx = graph_from_mask(mask).context();
        let (p, q, s) = (reduced(&p, &ctx), reduced(&q, &ctx), reduced(&s, &ctx));
        prop_assert_eq!(p.mul(&q, &ctx), q.mul(&p, &ctx));
        prop_assert_eq!(p.mul(&q, &ctx).mul(&s, &ctx), p.mul(&q.mul(&s, &ctx), &ctx));
    }

    #[test]
    fn linear_product_matches_general_product(mask in any::<u16>(), p in raw_poly(), var in 0..N, one_minus in any::<bool>()) {
        let ctx = graph_from_mask(mask).context();
        let p = reduced(&p, &ctx);
        let f = if one_minus { LinearFactor::one_minus(var) } else { LinearFactor::var(var) };
        prop_assert_eq!(p.mul_linear(f, &ctx), p.mul(&f.to_poly(), &ctx));
    }

    #[test]
    fn relabeling_commutes_with_reduction(mask in any::<u16>(), p in raw_poly(), perm in Just((0..N).collect::<Vec<_>>()).prop_shuffle()) {
        let g = graph_from_mask(mask);
        let lhs = reduced(&p, &g.context()).permute(&perm);
        let rhs = reduced(&permute_raw(&p, &perm), &g.permute(&perm).context());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_forms_round_trip(mask in any::<u16>(), p in raw_poly()) {
        let ctx = graph_from_mask(mask).context();
        let p = reduced(&p, &ctx);
        prop_assert_eq!(&parse_reduced(&to_infix(&p), &ctx).unwrap(), &p);
        prop_assert_eq!(&from_machine(&to_machine(&p), &ctx).unwrap(), &p);
    }

    #[test]
    fn float_coefficients_track_exact_ones(mask in any::<u16>(), p in raw_poly(), q in raw_poly()) {
        use dynproof::Scalar;
        let ctx = graph_from_mask(mask).context();
        let (p, q) = (reduced(&p, &ctx), reduced(&q, &ctx));
        let to_f = |x: &Poly| -> Polynomial<f64> { x.map_coeffs(|c| c.to_f64_lossy()) };
        let exact = to_f(&p.mul(&q, &ctx));
        let float = to_f(&p).mul(&to_f(&q), &ctx);
        prop_assert_eq!(exact, float);
    }
}

#[test]
fn edge_monomials_vanish() {
    let g = Graph::cycle(5);
    let ctx = g.context();
    let x1 = Poly::var(0);
    let x2 = Poly::var(1);
    assert!(x1.mul(&x2, &ctx).is_zero());
    assert_eq!(x1.mul(&x1, &ctx), x1);
}
