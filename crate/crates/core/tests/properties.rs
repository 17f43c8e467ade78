//! Cross-module randomized invariants.

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use hyperent_core::*;

fn arb_hypergraph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=max_n).prop_flat_map(move |n| {
        let full = (1u32 << n) - 1;
        proptest::collection::btree_set(1u32..=full, 0..=max_edges)
            .prop_map(move |edges| Hypergraph::new(n, edges).unwrap())
    })
}

fn arb_params() -> impl Strategy<Value = RandomizationParams> {
    proptest::collection::vec(0.0f64..=1.0, 19)
        .prop_map(|ps| RandomizationParams::new((2..=20).zip(ps)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_round_trips(h in arb_hypergraph(6, 8)) {
        let text = h.serialize();
        let parsed = parse_hypergraph(&text).unwrap();
        prop_assert_eq!(h, parsed);
    }

    #[test]
    fn spanning_enumeration_is_total_and_duplicate_free(h in arb_hypergraph(5, 6)) {
        let m = h.randomizable_edges().count();
        let subs: Vec<Hypergraph> = h.spanning_subhypergraphs().unwrap().collect();
        prop_assert_eq!(subs.len(), 1 << m);
        let mut seen = std::collections::HashSet::new();
        for s in &subs {
            prop_assert_eq!(s.n(), h.n());
            prop_assert!(seen.insert(s.edges().to_vec()), "duplicate subhypergraph");
            for loop_edge in h.loop_edges() {
                prop_assert!(s.edges().contains(&loop_edge));
            }
        }
    }

    #[test]
    fn phase_gates_commute_and_square_to_identity(
        h in arb_hypergraph(5, 6),
        e1 in 1u32..=31,
        e2 in 1u32..=31,
    ) {
        let full = (1u32 << h.n()) - 1;
        let e1 = (e1 & full).max(1);
        let e2 = (e2 & full).max(1);
        let s = build_state(&h).unwrap();
        prop_assert_eq!(s.apply_ce(e1).unwrap().apply_ce(e1).unwrap(), s.clone());
        let ab = s.apply_ce(e1).unwrap().apply_ce(e2).unwrap();
        let ba = s.apply_ce(e2).unwrap().apply_ce(e1).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn inner_product_depends_on_symmetric_difference(
        ha in arb_hypergraph(5, 5),
        hb_edges in proptest::collection::btree_set(1u32..=31, 0..=5),
    ) {
        let n = ha.n();
        let full = (1u32 << n) - 1;
        let hb_edges: Vec<u32> = hb_edges
            .into_iter()
            .map(|e| (e & full).max(1))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let hb = Hypergraph::new(n, hb_edges).unwrap();

        let ip = build_state(&ha)
            .unwrap()
            .inner_product(&build_state(&hb).unwrap())
            .unwrap();

        // Oracle: 2^-n sum_x (-1)^(edges of the symmetric difference covered
        // by x).
        let mut delta: Vec<u32> = Vec::new();
        for &e in ha.edges() {
            if !hb.edges().contains(&e) {
                delta.push(e);
            }
        }
        for &e in hb.edges() {
            if !ha.edges().contains(&e) {
                delta.push(e);
            }
        }
        let mut acc: i64 = 0;
        for x in 0..(1usize << n) {
            let hits = delta.iter().filter(|&&e| x & e as usize == e as usize).count();
            acc += if hits % 2 == 0 { 1 } else { -1 };
        }
        let oracle = BigRational::new(acc.into(), (1i64 << n).into());
        prop_assert_eq!(ip, oracle);
    }

    #[test]
    fn stabilizers_fix_random_states(h in arb_hypergraph(5, 6)) {
        let s = build_state(&h).unwrap();
        for i in 1..=h.n() {
            let g = stabilizer(&h, i).unwrap();
            prop_assert_eq!(g.apply(&s).unwrap(), s.clone());
        }
    }

    #[test]
    fn branch_weights_sum_to_one(
        h in arb_hypergraph(4, 5),
        params in arb_params(),
    ) {
        let ens = randomize(&h, &params).unwrap();
        prop_assert!((ens.weight_sum() - 1.0).abs() < 1e-12);
        for b in ens.branches() {
            prop_assert!((-1e-15..=1.0 + 1e-12).contains(&b.weight));
        }
    }

    #[test]
    fn symbolic_weights_sum_to_one_exactly(h in arb_hypergraph(4, 4)) {
        let total = symbolic_randomize(&h)
            .unwrap()
            .into_iter()
            .fold(RationalPolynomial::zero(), |acc, (w, _)| &acc + &w);
        prop_assert_eq!(total, RationalPolynomial::one());
    }

    #[test]
    fn overlap_polynomial_matches_density_expectation(
        h in arb_hypergraph(4, 4),
        params in arb_params(),
    ) {
        let overlap = overlap_polynomial(&h).unwrap();
        let mut point = BTreeMap::new();
        for k in h.randomizable_orders() {
            point.insert(k, params.get(k).unwrap());
        }
        let from_poly = overlap.eval_f64(&point);

        let rho = randomized_density(&h, &params).unwrap();
        let target = build_state(&h).unwrap();
        let from_density = target.expectation(&rho).unwrap();
        prop_assert!(
            (from_poly - from_density).abs() < 1e-10,
            "poly {} vs density {}",
            from_poly,
            from_density
        );
    }

    #[test]
    fn partial_transpose_involution_preserves_everything(
        h in arb_hypergraph(4, 4),
        params in arb_params(),
        mask in 1u32..=14,
    ) {
        let rho = randomized_density(&h, &params).unwrap();
        let full = (1u32 << h.n()) - 1;
        let mask = (mask & (full - 1)).max(1).min(full - 1);
        let side = Bipartition::new(h.n(), mask).unwrap();
        let pt = partial_transpose(&rho, &side).unwrap();
        prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(pt.hermiticity_defect() < 1e-12);
        let back = partial_transpose(
            &DensityMatrix::new(h.n(), pt).unwrap(),
            &side,
        )
        .unwrap();
        let diff = back.sub(rho.matrix()).max_abs();
        prop_assert!(diff < 1e-14);
    }

    #[test]
    fn negativity_formulas_agree(
        h in arb_hypergraph(4, 4),
        params in arb_params(),
        mask in 1u32..=14,
    ) {
        let rho = randomized_density(&h, &params).unwrap();
        let full = (1u32 << h.n()) - 1;
        let mask = (mask & (full - 1)).max(1).min(full - 1);
        let side = Bipartition::new(h.n(), mask).unwrap();
        let a = negativity(&rho, &side).unwrap();
        let b = negativity_trace_norm(&rho, &side).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "negative-sum {} vs trace-norm {}", a, b);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn negativity_is_convex(
        h1 in arb_hypergraph(3, 3),
        h2_edges in proptest::collection::btree_set(1u32..=7, 0..=3),
        params in arb_params(),
        alpha in 0.0f64..=1.0,
    ) {
        let n = h1.n();
        let full = (1u32 << n) - 1;
        let edges: Vec<u32> = h2_edges
            .into_iter()
            .map(|e| (e & full).max(1))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let h2 = Hypergraph::new(n, edges).unwrap();
        let r1 = randomized_density(&h1, &params).unwrap();
        let r2 = randomized_density(&h2, &params).unwrap();
        let mix = DensityMatrix::mix(&[(alpha, &r1), (1.0 - alpha, &r2)]).unwrap();
        let side = Bipartition::from_qubits(n, &[1]).unwrap();
        let lhs = negativity(&mix, &side).unwrap();
        let rhs = alpha * negativity(&r1, &side).unwrap()
            + (1.0 - alpha) * negativity(&r2, &side).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "convexity violated: {} > {}", lhs, rhs);
    }
}
