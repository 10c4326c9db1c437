use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evalerr::ErrorModel;
use crate::exactarith::GaussianRational;
use crate::hermite::{build, build_s, eval_repr, BasisRepresentation, EvalNoise, ReprKind};
use crate::lemniscate::{test_points, TestPointSet};
use crate::multicentric::IndicatorSpec;
use crate::poly::{critical_radius, BinaryPointEvaluator, LagrangeBasis};
use crate::presets;

use super::config::{CoeffMode, ExperimentConfig, RhoSpec};

/// One grid cell: the largest error over all test points.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub example: u32,
    pub repr: ReprKind,
    pub n: usize,
    pub rho: f64,
    pub nu: f64,
    pub mu: f64,
    pub max_abs_error: f64,
    /// Error above 1, non-finite, or the cell failed.
    pub clipped: bool,
}

impl SweepRow {
    fn key_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.example
            .cmp(&other.example)
            .then(self.repr.tag().cmp(&other.repr.tag()))
            .then(self.n.cmp(&other.n))
            .then(self.rho.total_cmp(&other.rho))
            .then(self.nu.total_cmp(&other.nu))
            .then(self.mu.total_cmp(&other.mu))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// One line per failed cell.
    pub diagnostics: Vec<String>,
}

impl SweepResult {
    /// Sorts rows by `(example, repr, n, rho, nu, mu)`.
    pub fn sort(&mut self) {
        self.rows.sort_by(SweepRow::key_cmp);
        self.diagnostics.sort();
    }

    pub fn find(&self, example: u32, repr: ReprKind, n: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows
            .iter()
            .filter(move |r| r.example == example && r.repr == repr && r.n == n)
    }
}

fn kind_label(kind: ReprKind) -> u64 {
    match kind {
        ReprKind::Multicentric => 0,
        ReprKind::Special => 1,
        ReprKind::Parallel => 2,
        ReprKind::Hermite => 3,
    }
}

/// Geometry shared by all orders of one example.
struct ExampleSetup {
    number: u32,
    spec: IndicatorSpec<GaussianRational>,
    float_basis: LagrangeBasis<Complex64>,
    rhos: Vec<f64>,
    points: Vec<std::result::Result<TestPointSet, String>>,
}

fn setup(number: u32, cfg: &ExperimentConfig) -> Result<ExampleSetup> {
    let spec = presets::by_number(number).ok_or_else(|| Error::InvalidArgument(format!("unknown example {number}")))?;
    let exact_float = spec.basis.to_float()?;
    let rhos = match &cfg.rho {
        RhoSpec::Absolute(v) => v.clone(),
        RhoSpec::Fraction(v) => {
            let crit = critical_radius(exact_float.p(), *exact_float.node(spec.target))?;
            v.iter().map(|f| f * crit).collect()
        }
    };
    let points = rhos
        .iter()
        .map(|&rho| test_points(exact_float.p(), rho, cfg.k_phi).map_err(|e| e.to_string()))
        .collect();
    let lead = spec.basis.p().leading().map(GaussianRational::to_float).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
    let float_basis = LagrangeBasis::with_leading(exact_float.nodes().to_vec(), lead)?;
    Ok(ExampleSetup { number, spec, float_basis, rhos, points })
}

fn float_repr(kind: ReprKind, ex: &ExampleSetup, n: usize, mode: CoeffMode) -> Result<BasisRepresentation<Complex64>> {
    match mode {
        CoeffMode::Exact => build(kind, &ex.spec.basis, ex.spec.target, n)?.to_float(),
        CoeffMode::Float => build(kind, &ex.float_basis, ex.spec.target, n),
    }
}

fn failed_rows(ex: &ExampleSetup, cfg: &ExperimentConfig, n: usize, ri: Option<usize>) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for (i, &rho) in ex.rhos.iter().enumerate() {
        if ri.is_some_and(|r| r != i) {
            continue;
        }
        for &nu in &cfg.nu {
            for &mu in &cfg.mu {
                for &repr in &cfg.reprs {
                    rows.push(SweepRow { example: ex.number, repr, n, rho, nu, mu, max_abs_error: f64::NAN, clipped: true });
                }
            }
        }
    }
    rows
}

/// All rows for one `(example, n)`.
fn run_cell(ex: &ExampleSetup, cfg: &ExperimentConfig, n: usize) -> (Vec<SweepRow>, Vec<String>) {
    let prepared = (|| -> Result<_> {
        let exact = build_s(&ex.spec.basis, ex.spec.target, n)?.expand();
        let reference = BinaryPointEvaluator::new(&exact);
        let reprs = cfg
            .reprs
            .iter()
            .map(|&k| float_repr(k, ex, n, cfg.coeff_mode).map(|r| (k, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok((reference, reprs))
    })();
    let (reference, reprs) = match prepared {
        Ok(v) => v,
        Err(e) => {
            return (failed_rows(ex, cfg, n, None), vec![format!("example {} n={n}: {e}", ex.number)]);
        }
    };
    let mut rows = Vec::new();
    let mut diags = Vec::new();
    for (ri, (&rho, pts)) in ex.rhos.iter().zip(&ex.points).enumerate() {
        let pts = match pts {
            Ok(p) => p,
            Err(e) => {
                rows.extend(failed_rows(ex, cfg, n, Some(ri)));
                diags.push(format!("example {} n={n} rho={rho:e}: {e}", ex.number));
                continue;
            }
        };
        let exact: Result<Vec<Complex64>> = pts.points.iter().map(|p| reference.eval(p.z)).collect();
        let exact = match exact {
            Ok(v) => v,
            Err(e) => {
                rows.extend(failed_rows(ex, cfg, n, Some(ri)));
                diags.push(format!("example {} n={n} rho={rho:e}: {e}", ex.number));
                continue;
            }
        };
        for &nu in &cfg.nu {
            for &mu in &cfg.mu {
                let model = ErrorModel { nu, mu, seed: cfg.seed };
                for (kind, r) in &reprs {
                    let mut worst = 0.0f64;
                    for (i, (pt, want)) in pts.points.iter().zip(&exact).enumerate() {
                        let context = [kind_label(*kind), n as u64, ri as u64, i as u64];
                        let noise = EvalNoise { model: &model, context: &context };
                        let err = match eval_repr(r, pt.z, Some(noise)) {
                            Ok(v) => (v - want).norm(),
                            Err(_) => f64::INFINITY,
                        };
                        worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
                    }
                    rows.push(SweepRow {
                        example: ex.number,
                        repr: *kind,
                        n,
                        rho,
                        nu,
                        mu,
                        max_abs_error: worst,
                        clipped: !(worst <= 1.0),
                    });
                }
            }
        }
    }
    (rows, diags)
}

/// Evaluates every selected representation at every test point of every grid
/// cell against the exact reference value, in parallel over `(example, n)`.
/// The output is sorted and independent of the schedule.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let setups = cfg.examples.iter().map(|&e| setup(e, cfg)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&ExampleSetup, usize)> = setups.iter().flat_map(|ex| cfg.n.iter().map(move |&n| (ex, n))).collect();
    let parts: Vec<(Vec<SweepRow>, Vec<String>)> = jobs.par_iter().map(|&(ex, n)| run_cell(ex, cfg, n)).collect();
    let mut result = SweepResult::default();
    for (rows, diags) in parts {
        result.rows.extend(rows);
        result.diagnostics.extend(diags);
    }
    result.sort();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(reprs: &[ReprKind]) -> ExperimentConfig {
        ExperimentConfig {
            examples: vec![1, 2],
            n: vec![2, 6],
            rho: RhoSpec::Fraction(vec![0.5]),
            nu: vec![0.0, 1e-8],
            mu: vec![0.0],
            k_phi: 3,
            seed: 11,
            reprs: reprs.to_vec(),
            coeff_mode: CoeffMode::Exact,
        }
    }

    #[test]
    fn grid_is_complete_and_sorted() {
        let result = run_sweep(&small(&ReprKind::ALL)).unwrap();
        assert_eq!(result.rows.len(), 2 * 2 * 2 * 4);
        assert!(result.diagnostics.is_empty());
        assert!(result.rows.windows(2).all(|w| w[0].key_cmp(&w[1]).is_lt()));
    }

    #[test]
    fn repeated_runs_are_identical() {
        let cfg = small(&[ReprKind::Multicentric, ReprKind::Parallel]);
        assert_eq!(run_sweep(&cfg).unwrap(), run_sweep(&cfg).unwrap());
    }

    #[test]
    fn noiseless_multicentric_rows_are_tiny() {
        let result = run_sweep(&small(&[ReprKind::Multicentric])).unwrap();
        for r in result.rows.iter().filter(|r| r.nu == 0.0) {
            assert!(r.max_abs_error < 1e-14, "{r:?}");
        }
    }

    #[test]
    fn failed_level_is_recorded() {
        let cfg = small(&[ReprKind::Special, ReprKind::Hermite]);
        let mut ex = setup(1, &cfg).unwrap();
        ex.points = vec![Err("root finder gave up".into())];
        let (rows, diags) = run_cell(&ex, &cfg, 4);
        assert_eq!(rows.len(), 2 * 2);
        assert!(rows.iter().all(|r| r.clipped && r.max_abs_error.is_nan()));
        assert_eq!(diags.len(), 1);
        assert!(diags[0].contains("root finder gave up"));
    }
}

