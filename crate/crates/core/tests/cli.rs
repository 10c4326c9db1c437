use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicentric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn coeffs_prints_the_reference_table() {
    let o = run(&["coeffs", "--example", "1", "--n", "8", "--method", "residues"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden_body(multicentric::presets::EXAMPLE1_GOLDEN));
    let o = run(&["coeffs", "--example", "2", "--n", "4", "--method", "recursion", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn float_coefficients_are_close_to_exact() {
    let o = run(&["coeffs", "--example", "1", "--n", "4", "--float"]);
    assert!(o.status.success());
    let first: Vec<f64> = stdout(&o)
        .lines()
        .take(5)
        .map(|l| l.split_whitespace().nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(first, vec![1.0, 0.0, 2.0, 0.0, 10.0]);
}

#[test]
fn bound_with_zero_perturbation_is_zero() {
    let o = run(&["bound", "--rho0", "0.1155", "--rho1", "0.2309", "--rho", "0.3464", "--eps0", "0", "--eps1", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
    let o = run(&["bound", "--rho0", "0.3", "--rho1", "0.2", "--rho", "0.4", "--eps0", "0", "--eps1", "0", "--l", "1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_flags_exit_with_usage() {
    let o = run(&["coeffs", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn build_dumps_the_special_form() {
    let o = run(&["build", "--kind", "S", "--example", "1", "--n", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("kind S\norder 3\n"));
    assert!(text.contains("cofactor: 1, 0, 4"));
    assert_eq!(run(&["build", "--kind", "Q"]).status.code(), Some(1));
}

#[test]
fn eval_reports_a_small_error() {
    let o = run(&["eval", "--kind", "M", "--example", "2", "--n", "8", "--z", "-0.1+0.05i"]);
    assert!(o.status.success());
    let err: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("abs_error "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 1e-14);
}

#[test]
fn geometry_subcommands_write_csv() {
    let o = run(&["testpoints", "--example", "2", "--rho-frac", "0.5", "--kphi", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 12);
    let o = run(&["curve", "--example", "1", "--rho", "0.2", "--resolution", "0.05"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("x,y,component\n"));
}

#[test]
fn sweep_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noise.cfg");
    std::fs::write(&cfg, "example = 1,2\nn = 4:4:12\nrho_frac = 0.02\nnu = 1e-8\nseed = 3\n").unwrap();
    let mut outputs = Vec::new();
    for run_id in 0..2 {
        let csv = dir.path().join(format!("out{run_id}.csv"));
        let svg = dir.path().join(format!("out{run_id}.svg"));
        let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((std::fs::read(csv).unwrap(), std::fs::read(svg).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(String::from_utf8_lossy(&outputs[0].0).lines().count(), 1 + 2 * 4 * 3);
}

#[test]
fn opapply_projects_a_diagonal_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("a.mtx");
    std::fs::write(&matrix, "% diag(0.05, -0.9, 1.1)\n1 1 0.05\n2 2 -0.9\n3 3 1.1\n").unwrap();
    let o = run(&["opapply", "--example", "1", "--n", "24", "--matrix", matrix.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out: Vec<f64> = stdout(&o)
        .lines()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(out.len(), 3);
    assert!((out[0] - 1.0).abs() < 1e-6 && out[1].abs() < 1e-6 && out[2].abs() < 1e-6, "{out:?}");
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
