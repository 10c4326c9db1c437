use multicentric::exactarith::GaussianRational;
use multicentric::experiment::{run_sweep, CoeffMode, ExperimentConfig, RhoSpec};
use multicentric::hermite::{build_m, eval_repr, ReprKind};
use multicentric::lemniscate::test_points;
use multicentric::poly::{critical_radius, LagrangeBasis};
use multicentric::presets;
use num_complex::Complex64;

fn float_basis(example: u32) -> LagrangeBasis<Complex64> {
    let spec = presets::by_number(example).unwrap();
    let lead = spec.basis.p().leading().unwrap().to_float().unwrap();
    let nodes = spec.basis.nodes().iter().map(|g| g.to_float().unwrap()).collect();
    LagrangeBasis::with_leading(nodes, lead).unwrap()
}

#[test]
fn multicentric_coefficients_computed_in_floats_match_exact_ones() {
    for example in [1u32, 2] {
        let spec = presets::by_number(example).unwrap();
        let fb = float_basis(example);
        let rho = 0.9 * critical_radius(fb.p(), *fb.node(spec.target)).unwrap();
        let pts = test_points(fb.p(), rho, 10).unwrap().points;
        for n in [4, 28, 52, 76, 100] {
            let exact = build_m::<GaussianRational>(&spec.basis, spec.target, n).unwrap().to_float().unwrap();
            let float = build_m(&fb, spec.target, n).unwrap();
            let worst = pts
                .iter()
                .map(|pt| (eval_repr(&exact, pt.z, None).unwrap() - eval_repr(&float, pt.z, None).unwrap()).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-14, "example {example} n={n}: {worst:e}");
        }
    }
}

fn level_sweep(mode: CoeffMode) -> multicentric::experiment::SweepResult {
    run_sweep(&ExperimentConfig {
        examples: vec![2],
        n: vec![24],
        rho: RhoSpec::Fraction(vec![0.9]),
        reprs: vec![ReprKind::Special],
        coeff_mode: mode,
        ..ExperimentConfig::default()
    })
    .unwrap()
}

#[test]
fn special_form_degrades_with_float_coefficients() {
    let exact = level_sweep(CoeffMode::Exact).rows[0].max_abs_error;
    let float = level_sweep(CoeffMode::Float).rows[0].max_abs_error;
    assert!(float > 100.0 * exact, "exact {exact:e}, float {float:e}");
}

#[test]
fn rounding_noise_in_the_special_form_grows_slowly_with_n() {
    let mut first = Vec::new();
    let mut last = Vec::new();
    for seed in 0..5 {
        let result = run_sweep(&ExperimentConfig {
            examples: vec![2],
            n: vec![4, 24],
            rho: RhoSpec::Fraction(vec![0.02]),
            mu: vec![1e-4],
            seed,
            reprs: vec![ReprKind::Special],
            ..ExperimentConfig::default()
        })
        .unwrap();
        first.push(result.rows[0].max_abs_error);
        last.push(result.rows[1].max_abs_error);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (a, b) = (mean(&first), mean(&last));
    assert!((2e-4..2e-3).contains(&a), "n=4 mean {a:e}");
    assert!((1e-3..1e-2).contains(&b), "n=24 mean {b:e}");
    assert!(b > 2.0 * a);
}
