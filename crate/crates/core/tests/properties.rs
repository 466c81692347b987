//! Property tests over random parameters, polynomials and points.

use hagedorn::multiindex::enumerate_upto;
use hagedorn::params::params_from_factors;
use hagedorn::{
    build_generating, build_ladder, build_recurrence, build_rodrigues, generate_params, ComplexMatrix, Frame,
    MultiIndex, PacketParams, PolyTable, SparsePoly, C64,
};
use proptest::prelude::*;

fn poly_strategy(d: usize, max_degree: u32) -> impl Strategy<Value = SparsePoly> {
    let n = enumerate_upto(d, max_degree).len();
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n).prop_map(move |cs| {
        let terms = enumerate_upto(d, max_degree)
            .into_iter()
            .zip(cs)
            .map(|(k, (re, im))| (k, C64::new(re, im)));
        SparsePoly::from_terms(d, Frame::Y, terms)
    })
}

fn point(d: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.5..1.5f64, -1.5..1.5f64), d)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

/// `G G^t + I / 2` from entries in `[-1, 1]`: symmetric positive definite with
/// condition number below 20 in `d <= 3`.
fn spd_strategy(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-1.0..1.0f64, d * d).prop_map(move |g| {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let dot: f64 = (0..d).map(|m| g[i * d + m] * g[j * d + m]).sum();
                        dot + if i == j { 0.5 } else { 0.0 }
                    })
                    .collect()
            })
            .collect()
    })
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_and_sum_evaluate_pointwise(
        (p, q, y) in (1usize..=3).prop_flat_map(|d| (poly_strategy(d, 3), poly_strategy(d, 3), point(d)))
    ) {
        let (pv, qv) = (p.eval(&y).unwrap(), q.eval(&y).unwrap());
        prop_assert!(rel((&p * &q).eval(&y).unwrap(), pv * qv) < 1e-12);
        prop_assert!(rel((&p + &q).eval(&y).unwrap(), pv + qv) < 1e-12);
        prop_assert!(rel((&p - &q).eval(&y).unwrap(), pv - qv) < 1e-12);
    }

    #[test]
    fn partial_derivative_obeys_leibniz(
        (p, q, j) in (1usize..=3).prop_flat_map(|d| (poly_strategy(d, 3), poly_strategy(d, 3), 0..d))
    ) {
        let lhs = (&p * &q).partial(j);
        let rhs = &(&p.partial(j) * &q) + &(&p * &q.partial(j));
        prop_assert!(lhs.distance(&rhs) < 1e-13);
    }

    #[test]
    fn composition_matches_substitution(
        (p, y, m) in (1usize..=3).prop_flat_map(|d| (poly_strategy(d, 3), point(d), point(d * d)))
    ) {
        let d = p.dim();
        let mat = ComplexMatrix::from_fn(d, |i, j| m[i * d + j]);
        let shift = vec![C64::new(0.25, -0.5); d];
        let composed = p.compose_linear(&mat, &shift).unwrap();
        let inner: Vec<C64> = mat.mul_vec(&y).iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert!(rel(composed.eval(&y).unwrap(), p.eval(&inner).unwrap()) < 1e-11);
    }
}

fn assert_polynomial_invariants(params: &PacketParams, table: &PolyTable) {
    for (k, p) in table.iter() {
        assert_eq!(p.degree(), Some(k.order()), "{k}");
        // p_k(-y) = (-1)^{|k|} p_k(y): only monomials of the parity of |k|.
        assert!(p.terms().all(|(e, _)| (e.order() + k.order()) % 2 == 0), "{k}");
    }
    assert_eq!(table.dim(), params.dim());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructions_agree_on_random_parameters(seed in 0u64..10_000, d in 1usize..=3) {
        let params = generate_params(seed, d, 1.0).unwrap();
        let reference = build_recurrence(&params, 4).unwrap();
        assert_polynomial_invariants(&params, &reference);
        for table in [
            build_generating(&params, 4).unwrap(),
            build_rodrigues(&params, 4).unwrap(),
            build_ladder(&params, 4).unwrap(),
        ] {
            prop_assert!(reference.distance(&table).unwrap().max < 1e-9, "{:?}", table.method());
        }
    }

    #[test]
    fn y_tables_depend_on_the_unitary_factor_only(
        seed in 0u64..10_000,
        (p1, p2) in (1usize..=3).prop_flat_map(|d| (spd_strategy(d), spd_strategy(d))),
        hbar in 0.05..5.0f64,
    ) {
        let d = p1.len();
        let base = generate_params(seed, d, 1.0).unwrap();
        let zero = vec![vec![0.0; d]; d];
        let ones = vec![vec![1.0; d]; d];
        let first = params_from_factors(&p1, base.unitary(), &zero, 1.0).unwrap();
        let second = params_from_factors(&p2, base.unitary(), &ones, hbar).unwrap();
        let r1 = build_recurrence(&first, 4).unwrap();
        let r2 = build_recurrence(&second, 4).unwrap();
        prop_assert!(r1.distance(&r2).unwrap().max < 1e-12);
        let g = build_rodrigues(&second, 4).unwrap();
        prop_assert!(r1.distance(&g).unwrap().max < 1e-12);
        let l = build_ladder(&second, 4).unwrap();
        prop_assert!(r1.distance(&l).unwrap().max < 1e-12);
    }

    #[test]
    fn tables_and_params_round_trip_through_json(seed in 0u64..10_000, d in 1usize..=3) {
        let params = generate_params(seed, d, 1.5).unwrap();
        let back = PacketParams::from_json(&params.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), params.to_json());
        let table = build_generating(&params, 3).unwrap();
        let parsed = PolyTable::from_json(&table.to_json()).unwrap();
        prop_assert_eq!(parsed.distance(&table).unwrap().max, 0.0);
        prop_assert_eq!(parsed.to_json(), table.to_json());
    }

    #[test]
    fn ground_index_is_one(seed in 0u64..10_000, d in 1usize..=5) {
        let params = generate_params(seed, d, 1.0).unwrap();
        let table = build_recurrence(&params, 1).unwrap();
        let p0 = table.get(&MultiIndex::zeros(d)).unwrap();
        prop_assert_eq!(p0.len(), 1);
        prop_assert_eq!(p0.coeff(&MultiIndex::zeros(d)), C64::new(1.0, 0.0));
    }
}
