use multicentric::exactarith::{GaussianRational, Scalar};
use multicentric::hermite::{build, build_h, build_t_general, derivatives_at, HermiteData, ReprKind};
use multicentric::multicentric::IndicatorSpec;
use multicentric::poly::{LagrangeBasis, Poly};
use multicentric::presets;
use proptest::prelude::*;

type G = GaussianRational;

fn examples() -> Vec<IndicatorSpec<G>> {
    vec![presets::example1(), presets::example2()]
}

#[test]
fn four_forms_expand_identically() {
    for spec in examples() {
        for n in 0..=12 {
            let h = build_h(&spec.basis, spec.target, n).unwrap().expand();
            for kind in [ReprKind::Multicentric, ReprKind::Special, ReprKind::Parallel] {
                let e = build(kind, &spec.basis, spec.target, n).unwrap().expand();
                assert_eq!(e, h, "{kind:?} n={n}");
            }
            assert!(h.degree().unwrap() < 3 * (n + 1));
        }
    }
}

#[test]
fn interpolation_conditions_hold_exactly() {
    for spec in examples() {
        for n in 0..=12 {
            let h = build_h(&spec.basis, spec.target, n).unwrap().expand();
            for (k, node) in spec.basis.nodes().iter().enumerate() {
                let d = derivatives_at(&h, node, n);
                let want0 = if k == spec.target { G::one() } else { G::zero() };
                assert_eq!(d[0], want0, "n={n} node {k}");
                assert!(d[1..].iter().all(G::is_zero), "n={n} node {k}");
            }
        }
    }
}

#[test]
fn idempotent_modulo_power_of_p() {
    for spec in examples() {
        for n in 0..=12 {
            let h = build_h(&spec.basis, spec.target, n).unwrap().expand();
            let (_, rem) = (&(&h * &h) - &h).div_rem(&spec.basis.p().pow(n + 1)).unwrap();
            assert!(rem.is_zero(), "n={n}");
        }
    }
}

#[test]
fn every_target_yields_a_partition_of_unity() {
    let b = presets::example2().basis;
    for n in [0, 3, 7] {
        let sum = (0..3).fold(Poly::zero(), |acc, k| &acc + &build_h(&b, k, n).unwrap().expand());
        assert_eq!(sum, Poly::one());
    }
}

fn gaussian_nodes() -> impl Strategy<Value = Vec<G>> {
    prop::collection::hash_set((-4i64..4, -4i64..4), 2..4)
        .prop_map(|set| set.into_iter().map(|(a, b)| G::from_ints(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn general_form_is_a_projector(
        nodes in gaussian_nodes(),
        n in 0usize..3,
        raw in prop::collection::vec((-6i64..6, -6i64..6), 12),
    ) {
        let basis = LagrangeBasis::new(nodes).unwrap();
        let deg = basis.degree() * (n + 1) - 1;
        let q = Poly::new(raw.iter().take(deg + 1).map(|&(a, b)| G::from_ints(a, b)).collect());
        let data = HermiteData::from_poly(&q, &basis, n);
        prop_assert_eq!(build_t_general(&basis, &data).unwrap(), q);
    }

    #[test]
    fn forms_agree_on_random_nodes(nodes in gaussian_nodes(), n in 0usize..4) {
        let basis = LagrangeBasis::new(nodes).unwrap();
        let h = build_h(&basis, 0, n).unwrap().expand();
        for kind in [ReprKind::Multicentric, ReprKind::Parallel] {
            prop_assert_eq!(build(kind, &basis, 0, n).unwrap().expand(), h.clone());
        }
    }
}
