//! Command-line front end: coefficient tables, representation dumps, single
//! evaluations, lemniscate geometry, the total-error bound, sweeps and the
//! operator projection.

use std::io::{ErrorKind, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use multicentric::evalerr::ErrorModel;
use multicentric::exactarith::GaussianRational;
use multicentric::experiment::{emit_csv, emit_plot, run_sweep, ExperimentConfig};
use multicentric::hermite::{build, build_s, eval_repr, EvalNoise, ReprKind};
use multicentric::lemniscate::{contour_quantities, error_bound, level_curve, test_points, write_curves_csv, BoundInputs};
use multicentric::multicentric::{indicator_coeffs, parse_golden, IndicatorMethod, IndicatorSpec};
use multicentric::operator::{
    apply_indicator, idempotency_residual, parse_coordinate, read_dense_csv, read_vector_csv, vector_to_csv,
    LinearOperator,
};
use multicentric::poly::{critical_radius, BinaryPointEvaluator, LagrangeBasis};
use multicentric::{presets, Error, Result};

#[derive(Parser)]
#[command(name = "multicentric", version, about = "Multicentric indicator representations and their evaluation stability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the indicator coefficient table in `component order value` lines.
    Coeffs(CoeffsArgs),
    /// Dump one representation of the indicator polynomial.
    Build(BuildArgs),
    /// Evaluate a representation at one point against the exact value.
    Eval(EvalArgs),
    /// Print test points on a level curve as CSV.
    Testpoints(TestpointsArgs),
    /// Trace a level curve and print its chains as CSV.
    Curve(CurveArgs),
    /// Evaluate the total-error bound.
    Bound(BoundArgs),
    /// Run a sweep from a config file and write CSV and SVG.
    Sweep(SweepArgs),
    /// Apply the indicator representation to a matrix and a vector.
    Opapply(OpapplyArgs),
    /// Check the built-in reference data.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Residues,
    Recursion,
}

#[derive(Args)]
struct ExampleArgs {
    /// Preset number (1 or 2).
    #[arg(long, default_value_t = 1)]
    example: u32,
    /// Truncation order.
    #[arg(long, default_value_t = 8)]
    n: usize,
}

#[derive(Args)]
struct LevelArgs {
    /// Absolute level.
    #[arg(long, conflicts_with = "rho_frac")]
    rho: Option<f64>,
    /// Level as a fraction of the critical level of the target component.
    #[arg(long, default_value_t = 0.9)]
    rho_frac: f64,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    ex: ExampleArgs,
    #[arg(long, value_enum, default_value_t = Method::Residues)]
    method: Method,
    /// Exact rational arithmetic (the default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Binary64 arithmetic throughout.
    #[arg(long)]
    float: bool,
    /// Compare against the bundled reference table instead of printing.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    ex: ExampleArgs,
    /// One of M, S, T, H.
    #[arg(long, default_value = "M")]
    kind: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    ex: ExampleArgs,
    #[arg(long, default_value = "M")]
    kind: String,
    /// Evaluation point, e.g. `0.1+0.05i`.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TestpointsArgs {
    #[arg(long, default_value_t = 1)]
    example: u32,
    #[command(flatten)]
    level: LevelArgs,
    #[arg(long, default_value_t = 10)]
    kphi: usize,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value_t = 1)]
    example: u32,
    #[command(flatten)]
    level: LevelArgs,
    /// Largest spacing between consecutive curve points.
    #[arg(long, default_value_t = 0.01)]
    resolution: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    rho0: f64,
    #[arg(long)]
    rho1: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long)]
    eps0: f64,
    #[arg(long)]
    eps1: f64,
    /// Bound on the represented function.
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// `L(rho)`; computed from the example when absent.
    #[arg(long)]
    l: Option<f64>,
    /// `D(rho1)`; computed from the example when absent.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = 1)]
    example: u32,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "sweep.csv")]
    csv: PathBuf,
    #[arg(long, default_value = "sweep.svg")]
    svg: PathBuf,
}

#[derive(Args)]
struct OpapplyArgs {
    #[command(flatten)]
    ex: ExampleArgs,
    /// Coordinate text (`row col re [im]`, 1-based) or dense CSV when the name ends in `.csv`.
    #[arg(long)]
    matrix: PathBuf,
    /// Vector CSV; all ones when absent.
    #[arg(long)]
    vector: Option<PathBuf>,
    /// Random probes for the idempotency residual; none when 0.
    #[arg(long, default_value_t = 0)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Writes to standard output; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn preset(number: u32) -> Result<IndicatorSpec<GaussianRational>> {
    presets::by_number(number).ok_or_else(|| Error::InvalidArgument(format!("unknown example {number}")))
}

fn float_basis(spec: &IndicatorSpec<GaussianRational>) -> Result<LagrangeBasis<Complex64>> {
    let lead = spec.basis.p().leading().map(GaussianRational::to_float).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
    let nodes = spec.basis.nodes().iter().map(GaussianRational::to_float).collect::<Result<Vec<_>>>()?;
    LagrangeBasis::with_leading(nodes, lead)
}

fn level(spec: &IndicatorSpec<GaussianRational>, args: &LevelArgs) -> Result<(LagrangeBasis<Complex64>, f64)> {
    let basis = float_basis(spec)?;
    let rho = match args.rho {
        Some(r) => r,
        None => args.rho_frac * critical_radius(basis.p(), *basis.node(spec.target))?,
    };
    Ok((basis, rho))
}

fn method(m: Method) -> IndicatorMethod {
    match m {
        Method::Residues => IndicatorMethod::Residues,
        Method::Recursion => IndicatorMethod::Recursion,
    }
}

fn golden(example: u32) -> Result<&'static str> {
    match example {
        1 => Ok(presets::EXAMPLE1_GOLDEN),
        2 => Ok(presets::EXAMPLE2_GOLDEN),
        _ => Err(Error::InvalidArgument(format!("no reference table for example {example}"))),
    }
}

fn coeffs(a: &CoeffsArgs) -> Result<()> {
    let spec = preset(a.ex.example)?;
    if a.float {
        if a.check {
            return Err(Error::InvalidArgument("--check compares exact tables only".into()));
        }
        let fspec = IndicatorSpec::new(float_basis(&spec)?, spec.target)?;
        let rep = indicator_coeffs(&fspec, a.ex.n, method(a.method))?;
        let mut text = String::new();
        for (k, row) in rep.components().iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                text.push_str(&format!("{} {j} {:e} {:e}\n", k + 1, c.re, c.im));
            }
        }
        return emit(&text);
    }
    let rep = indicator_coeffs(&spec, a.ex.n, method(a.method))?;
    if !a.check {
        return emit(&rep.to_golden());
    }
    let want = parse_golden(golden(a.ex.example)?)?;
    let order = want.first().map_or(0, |r| r.len().saturating_sub(1));
    if a.ex.n < order {
        return Err(Error::InvalidArgument(format!("the reference table runs to order {order}; use --n {order} or more")));
    }
    let got = rep.truncate(order);
    if got.components() != want.as_slice() {
        return Err(Error::InvalidArgument(format!("example {} differs from the reference table", a.ex.example)));
    }
    println!("example {} matches the reference table through order {order}", a.ex.example);
    Ok(())
}

fn dump(a: &BuildArgs) -> Result<()> {
    let spec = preset(a.ex.example)?;
    let rep = build(ReprKind::from_tag(&a.kind)?, &spec.basis, spec.target, a.ex.n)?;
    emit(&rep.to_text())
}

fn eval(a: &EvalArgs) -> Result<()> {
    let spec = preset(a.ex.example)?;
    let z: Complex64 = a.z.trim().parse().map_err(|_| Error::Parse { what: "complex number", input: a.z.clone() })?;
    let kind = ReprKind::from_tag(&a.kind)?;
    let rep = build(kind, &spec.basis, spec.target, a.ex.n)?.to_float()?;
    let model = ErrorModel::new(a.nu, a.mu, a.seed)?;
    let context = [0u64];
    let value = eval_repr(&rep, z, Some(EvalNoise { model: &model, context: &context }))?;
    let exact = BinaryPointEvaluator::new(&build_s(&spec.basis, spec.target, a.ex.n)?.expand()).eval(z)?;
    println!("value {:e} {:e}", value.re, value.im);
    println!("exact {:e} {:e}", exact.re, exact.im);
    println!("abs_error {:e}", (value - exact).norm());
    Ok(())
}

fn testpoints(a: &TestpointsArgs) -> Result<()> {
    let spec = preset(a.example)?;
    let (basis, rho) = level(&spec, &a.level)?;
    let set = test_points(basis.p(), rho, a.kphi)?;
    let node_of = |root: Complex64| {
        (0..basis.degree()).min_by(|&i, &j| (basis.node(i) - root).norm().total_cmp(&(basis.node(j) - root).norm()))
    };
    let mut text = String::from("x,y,component,phase\n");
    for pt in &set.points {
        let node = node_of(set.roots[pt.component]).unwrap_or(0);
        text.push_str(&format!("{:e},{:e},{},{:e}\n", pt.z.re, pt.z.im, node + 1, pt.phase));
    }
    emit(&text)
}

fn curve(a: &CurveArgs) -> Result<()> {
    let spec = preset(a.example)?;
    let (basis, rho) = level(&spec, &a.level)?;
    let chains = level_curve(basis.p(), rho, a.resolution)?;
    match &a.out {
        Some(path) => write_curves_csv(&chains, std::fs::File::create(path)?),
        None => {
            let mut buf = Vec::new();
            write_curves_csv(&chains, &mut buf)?;
            emit(&String::from_utf8_lossy(&buf))
        }
    }
}

fn bound(a: &BoundArgs) -> Result<()> {
    let (l, d) = match (a.l, a.d) {
        (Some(l), Some(d)) => (l, d),
        (l, d) => {
            let basis = float_basis(&preset(a.example)?)?;
            let l = match l {
                Some(v) => v,
                None => contour_quantities(&basis, a.rho)?.l,
            };
            let d = match d {
                Some(v) => v,
                None => contour_quantities(&basis, a.rho1)?.d,
            };
            (l, d)
        }
    };
    let inputs = BoundInputs { rho0: a.rho0, rho1: a.rho1, rho: a.rho, eps0: a.eps0, eps1: a.eps1, m: a.m, d, l };
    println!("{:e}", error_bound(&inputs)?);
    Ok(())
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let cfg = ExperimentConfig::load(&a.config)?;
    let result = run_sweep(&cfg)?;
    for d in &result.diagnostics {
        eprintln!("warning: {d}");
    }
    emit_csv(&result, &a.csv)?;
    emit_plot(&result, &a.svg)?;
    println!("{} rows written to {} and {}", result.rows.len(), a.csv.display(), a.svg.display());
    Ok(())
}

fn opapply(a: &OpapplyArgs) -> Result<()> {
    let spec = preset(a.ex.example)?;
    let rep = indicator_coeffs(&spec, a.ex.n, IndicatorMethod::Residues)?.to_float()?;
    let dense = a.matrix.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let op: Box<dyn LinearOperator> = if dense {
        Box::new(read_dense_csv(std::fs::File::open(&a.matrix)?)?)
    } else {
        Box::new(parse_coordinate(&std::fs::read_to_string(&a.matrix)?)?)
    };
    let b = match &a.vector {
        Some(path) => read_vector_csv(std::fs::File::open(path)?)?,
        None => vec![Complex64::new(1.0, 0.0); op.dim()],
    };
    let result = apply_indicator(&rep, op.as_ref(), &b)?;
    emit(&vector_to_csv(&result.output))?;
    eprintln!("order {} matvecs {} residual {:e}", result.order, result.matvecs, result.idempotency_residual);
    if a.probes > 0 {
        eprintln!("probe residual {:e}", idempotency_residual(&rep, op.as_ref(), a.probes, a.seed)?);
    }
    Ok(())
}

fn selftest() -> Result<bool> {
    let mut ok = true;
    let mut report = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    for example in [1u32, 2] {
        let spec = preset(example)?;
        let want = parse_golden(golden(example)?)?;
        let order = want.first().map_or(0, |r| r.len().saturating_sub(1));
        let got = indicator_coeffs(&spec, order, IndicatorMethod::Residues)?;
        report(&format!("example {example}: reference table through order {order}"), got.components() == want.as_slice());
        let recursion = indicator_coeffs(&spec, 12, IndicatorMethod::Recursion)?;
        let residues = indicator_coeffs(&spec, 12, IndicatorMethod::Residues)?;
        report(&format!("example {example}: recursion equals residues at order 12"), recursion == residues);
        let same = (0..=6).all(|n| {
            let plain = build(ReprKind::Hermite, &spec.basis, spec.target, n).map(|r| r.expand());
            ReprKind::ALL.iter().all(|&k| {
                build(k, &spec.basis, spec.target, n).map(|r| r.expand()).ok() == plain.clone().ok()
            })
        });
        report(&format!("example {example}: all four forms agree through order 6"), same);
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Coeffs(a) => coeffs(&a).map(|_| true),
        Command::Build(a) => dump(&a).map(|_| true),
        Command::Eval(a) => eval(&a).map(|_| true),
        Command::Testpoints(a) => testpoints(&a).map(|_| true),
        Command::Curve(a) => curve(&a).map(|_| true),
        Command::Bound(a) => bound(&a).map(|_| true),
        Command::Sweep(a) => sweep(&a).map(|_| true),
        Command::Opapply(a) => opapply(&a).map(|_| true),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
