//! Level sets `|p(z)| = ρ`: test points, traced level curves, contour
//! quadrature for `L_k(ρ)` and `D(ρ)`, and the total-error bound for inexact
//! evaluation of `z` and `w = p(z)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evalerr::NoiseStream;
use crate::multicentric::FloatRep;
use crate::poly::{critical_levels, roots_numeric, FloatPoly, LagrangeBasis, Poly};

/// Relative distance to a critical level below which geometry is refused.
const CRITICAL_GUARD: f64 = 1e-6;

/// A level `ρ > 0` of `|p|` for a non-constant `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LemniscateSpec {
    p: FloatPoly,
    rho: f64,
}

impl LemniscateSpec {
    pub fn new(p: FloatPoly, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidArgument(format!("level must be positive and finite, got {rho}")));
        }
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidArgument("level sets need a non-constant polynomial".into()));
        }
        Ok(Self { p, rho })
    }

    pub fn p(&self) -> &FloatPoly {
        &self.p
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Fails when `ρ` is within the guard distance of a critical level.
    pub fn ensure_regular(&self) -> Result<()> {
        for (_, level) in critical_levels(&self.p)? {
            if (self.rho - level).abs() <= CRITICAL_GUARD * level {
                return Err(Error::NearCriticalLevel { rho: self.rho, critical: level });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestPoint {
    pub z: Complex64,
    pub phase: f64,
    /// Index into [`TestPointSet::roots`] of the root enclosed by the
    /// component through `z`; meaningful below the first merge level.
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestPointSet {
    pub points: Vec<TestPoint>,
    pub phases: Vec<f64>,
    /// Roots of `p`, ordered by real then imaginary part.
    pub roots: Vec<Complex64>,
}

fn newton_polish(q: &FloatPoly, dq: &FloatPoly, mut z: Complex64) -> Complex64 {
    let mut best = (q.eval(&z).norm(), z);
    for _ in 0..8 {
        let step = q.eval(&z) / dq.eval(&z);
        if !step.is_finite() {
            break;
        }
        z -= step;
        let r = q.eval(&z).norm();
        if r < best.0 {
            best = (r, z);
        } else {
            break;
        }
    }
    best.1
}

fn nearest(roots: &[Complex64], z: Complex64) -> usize {
    (0..roots.len())
        .min_by(|&a, &b| (roots[a] - z).norm().total_cmp(&(roots[b] - z).norm()))
        .unwrap_or(0)
}

const SHRINK_STEPS: usize = 64;

/// Follows `p(ζ) = t·p(z)` from `t = 1` to `t = 0`. Below the critical level
/// the path stays in the component through `z` and ends at its root.
fn enclosed_root(p: &FloatPoly, dp: &FloatPoly, roots: &[Complex64], z: Complex64) -> usize {
    let w = p.eval(&z);
    let mut zeta = z;
    for step in 1..=SHRINK_STEPS {
        let target = w * (1.0 - step as f64 / SHRINK_STEPS as f64);
        for _ in 0..6 {
            let delta = (p.eval(&zeta) - target) / dp.eval(&zeta);
            if !delta.is_finite() {
                break;
            }
            zeta -= delta;
        }
    }
    nearest(roots, zeta)
}

/// All solutions of `p(z) = ρ e^{2πiφ}` for `φ = i/k_phi`, `i = 0..k_phi`.
/// Points are ordered by phase, then by component.
pub fn test_points(p: &FloatPoly, rho: f64, k_phi: usize) -> Result<TestPointSet> {
    if k_phi == 0 {
        return Err(Error::InvalidArgument("k_phi must be at least 1".into()));
    }
    let spec = LemniscateSpec::new(p.clone(), rho)?;
    let mut roots = roots_numeric(spec.p())?;
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let dp = p.derivative();
    let phases: Vec<f64> = (0..k_phi).map(|i| i as f64 / k_phi as f64).collect();
    let mut points = Vec::with_capacity(k_phi * roots.len());
    for &phase in &phases {
        let target = Complex64::from_polar(rho, 2.0 * PI * phase);
        let q = p - &Poly::constant(target);
        let dq = q.derivative();
        let mut sols: Vec<TestPoint> = roots_numeric(&q)?
            .into_iter()
            .map(|z| {
                let z = newton_polish(&q, &dq, z);
                TestPoint { z, phase, component: enclosed_root(p, &dp, &roots, z) }
            })
            .collect();
        sols.sort_by(|a, b| {
            a.component
                .cmp(&b.component)
                .then(a.z.re.total_cmp(&b.z.re))
                .then(a.z.im.total_cmp(&b.z.im))
        });
        points.extend(sols);
    }
    Ok(TestPointSet { points, phases, roots })
}

/// Traces `p(z) = ρ e^{iθ}` for `θ ∈ [0, 2π]` from every solution at `θ = 0`
/// and joins the branches into closed chains, one per component. Consecutive
/// points (including last to first) are at most `resolution` apart.
pub fn level_curve(p: &FloatPoly, rho: f64, resolution: f64) -> Result<Vec<Vec<Complex64>>> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidArgument(format!("resolution must be positive, got {resolution}")));
    }
    let spec = LemniscateSpec::new(p.clone(), rho)?;
    spec.ensure_regular()?;
    let dp = p.derivative();
    let starts: Vec<Complex64> = roots_numeric(&(p - &Poly::constant(Complex64::new(rho, 0.0))))?;
    let mut branches = Vec::with_capacity(starts.len());
    let mut successor = Vec::with_capacity(starts.len());
    for &s in &starts {
        let path = trace_branch(p, &dp, rho, s, resolution)?;
        let end = *path.last().unwrap();
        let next = nearest(&starts, end);
        if (starts[next] - end).norm() > resolution {
            return Err(Error::NearCriticalLevel { rho, critical: f64::NAN });
        }
        successor.push(next);
        branches.push(path);
    }
    let mut sorted = successor.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != starts.len() {
        return Err(Error::NearCriticalLevel { rho, critical: f64::NAN });
    }
    let mut used = vec![false; starts.len()];
    let mut chains = Vec::new();
    for first in 0..starts.len() {
        if used[first] {
            continue;
        }
        let mut chain = Vec::new();
        let mut b = first;
        while !used[b] {
            used[b] = true;
            let path = &branches[b];
            chain.extend_from_slice(&path[..path.len() - 1]);
            b = successor[b];
        }
        chains.push(chain);
    }
    Ok(chains)
}

/// Predictor–corrector continuation of one branch over `θ ∈ [0, 2π]`.
fn trace_branch(p: &FloatPoly, dp: &FloatPoly, rho: f64, start: Complex64, resolution: f64) -> Result<Vec<Complex64>> {
    let tangent = |z: Complex64, theta: f64| Complex64::i() * Complex64::from_polar(rho, theta) / dp.eval(&z);
    let mut path = vec![start];
    let (mut z, mut theta) = (start, 0.0f64);
    let mut h = 0.05f64;
    while theta < 2.0 * PI {
        let v = tangent(z, theta);
        h = h.min(0.9 * resolution / v.norm()).min(2.0 * PI - theta).min(0.1);
        if !(h > 1e-12) {
            return Err(Error::NearCriticalLevel { rho, critical: f64::NAN });
        }
        let next_theta = if theta + h >= 2.0 * PI - 1e-15 { 2.0 * PI } else { theta + h };
        let mid = z + v * (0.5 * (next_theta - theta));
        let predicted = z + tangent(mid, theta + 0.5 * (next_theta - theta)) * (next_theta - theta);
        let target = Complex64::from_polar(rho, next_theta);
        let mut zc = predicted;
        let mut ok = false;
        for _ in 0..10 {
            let step = (p.eval(&zc) - target) / dp.eval(&zc);
            if !step.is_finite() {
                break;
            }
            zc -= step;
            if step.norm() <= 1e-14 * (1.0 + zc.norm()) {
                ok = true;
                break;
            }
        }
        if !ok || (zc - z).norm() > resolution || (zc - predicted).norm() > 0.25 * resolution {
            h *= 0.5;
            continue;
        }
        z = zc;
        theta = next_theta;
        path.push(z);
        h *= 1.5;
    }
    Ok(path)
}

/// Writes chains as `x,y,component` rows with a 1-based component index.
pub fn write_curves_csv<W: Write>(chains: &[Vec<Complex64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "component"])?;
    for (c, chain) in chains.iter().enumerate() {
        for z in chain {
            w.write_record([format!("{:e}", z.re), format!("{:e}", z.im), (c + 1).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourQuantities {
    /// `L_k(ρ) = (1/2π) ∮ |dλ| / |λ − λ_k|`.
    pub l_k: Vec<f64>,
    pub l: f64,
    /// `max_k max_{γ_ρ} |δ_k|`.
    pub d: f64,
    /// Number of θ samples at convergence.
    pub samples: usize,
}

/// Trapezoid rule in `θ` over all branches, doubling the sample count until
/// every `L_k` changes by less than `1e-8`. Along a branch
/// `|dλ| = ρ / |p′(λ)| dθ`.
pub fn contour_quantities(basis: &LagrangeBasis<Complex64>, rho: f64) -> Result<ContourQuantities> {
    const MAX_SAMPLES: usize = 1 << 16;
    let p = basis.p();
    let spec = LemniscateSpec::new(p.clone(), rho)?;
    spec.ensure_regular()?;
    let dp = p.derivative();
    let d = basis.degree();
    let sample = |theta: f64| -> Result<Vec<Complex64>> {
        let target = Complex64::from_polar(rho, theta);
        let q = p - &Poly::constant(target);
        let dq = q.derivative();
        Ok(roots_numeric(&q)?.into_iter().map(|z| newton_polish(&q, &dq, z)).collect())
    };
    let mut points: Vec<Complex64> = Vec::new();
    let mut sums = vec![0.0; d];
    let mut n = 32usize;
    let add = |theta: f64, points: &mut Vec<Complex64>, sums: &mut [f64]| -> Result<()> {
        for z in sample(theta)? {
            let speed = rho / dp.eval(&z).norm();
            for (k, s) in sums.iter_mut().enumerate() {
                *s += speed / (z - basis.node(k)).norm();
            }
            points.push(z);
        }
        Ok(())
    };
    for i in 0..n {
        add(2.0 * PI * i as f64 / n as f64, &mut points, &mut sums)?;
    }
    let mut prev: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    loop {
        for i in 0..n {
            add(2.0 * PI * (2 * i + 1) as f64 / (2 * n) as f64, &mut points, &mut sums)?;
        }
        n *= 2;
        let cur: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
        let change = cur.iter().zip(&prev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prev = cur;
        if change < 1e-8 {
            break;
        }
        if n >= MAX_SAMPLES {
            return Err(Error::NoConvergence { iterations: n, max_step: change, best: Vec::new() });
        }
    }
    let dmax = points
        .iter()
        .flat_map(|z| basis.deltas().iter().map(move |delta| delta.eval(z).norm()))
        .fold(0.0, f64::max);
    let l = prev.iter().sum();
    Ok(ContourQuantities { l_k: prev, l, d: dmax, samples: n })
}

/// Inputs of the total-error bound; `m` bounds `|φ|` on `|p| ≤ ρ`, `d` is
/// `D(ρ₁)` and `l` is `L(ρ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub rho0: f64,
    pub rho1: f64,
    pub rho: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub m: f64,
    pub d: f64,
    pub l: f64,
}

/// `M·L·{ρ/(ρ−ρ₀)·ε₀ + D·ρ₁/(ρ−ρ₁)²·ε₁}`.
pub fn error_bound(b: &BoundInputs) -> Result<f64> {
    if !(0.0 <= b.rho0 && b.rho0 < b.rho1 && b.rho1 < b.rho) {
        return Err(Error::InvalidArgument(format!(
            "levels must satisfy 0 ≤ rho0 < rho1 < rho, got {} {} {}",
            b.rho0, b.rho1, b.rho
        )));
    }
    for (name, v) in [("eps0", b.eps0), ("eps1", b.eps1), ("M", b.m), ("D", b.d), ("L", b.l)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")));
        }
    }
    let first = b.rho / (b.rho - b.rho0) * b.eps0;
    let second = b.d * b.rho1 / ((b.rho - b.rho1) * (b.rho - b.rho1)) * b.eps1;
    Ok(b.m * b.l * (first + second))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentReport {
    pub bound: f64,
    pub max_observed: f64,
    pub accepted: usize,
    /// Draws discarded because they violated the `|δ_k(ẑ)|` requirement.
    pub rejected: usize,
}

impl ContainmentReport {
    pub fn contained(&self) -> bool {
        self.max_observed <= self.bound
    }
}

/// Monte-Carlo check of the bound for `φ̂(z) = Σ_k δ_k(ẑ_k) f_k(ŵ_k)` at points
/// `|p(z)| ≤ ρ₀`, with `|δ_k(z) − δ_k(ẑ_k)| ≤ ε₀`, `|p(z) − ŵ_k| ≤ ε₁`,
/// `|ŵ_k| ≤ ρ₁` and `|δ_k(ẑ_k)| ≤ D(ρ₁)`. `φ` is the truncated series `rep`.
pub fn monte_carlo_containment(rep: &FloatRep, inputs: &BoundInputs, trials: usize, seed: u64) -> Result<ContainmentReport> {
    let bound = error_bound(inputs)?;
    let basis = rep.basis();
    let p = basis.p();
    let dps: Vec<FloatPoly> = basis.deltas().iter().map(Poly::derivative).collect();
    let d_rho1 = contour_quantities(basis, inputs.rho1)?.d;
    let series = |k: usize, w: Complex64| {
        let row = rep.component(k);
        row.iter().rev().skip(1).fold(row[row.len() - 1], |acc, &c| acc * w + c)
    };
    let mut max_observed = 0.0f64;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    for t in 0..trials as u64 {
        let mut rng = NoiseStream::new(seed, &[t]);
        let w0 = Complex64::from_polar(inputs.rho0 * rng.unit().abs().sqrt(), PI * rng.unit());
        let candidates = roots_numeric(&(p - &Poly::constant(w0)))?;
        let z = candidates[((rng.unit().abs() * candidates.len() as f64) as usize).min(candidates.len() - 1)];
        let w = p.eval(&z);
        if w.norm() > inputs.rho0 {
            rejected += 1;
            continue;
        }
        let exact: Complex64 = (0..basis.degree()).map(|k| basis.delta(k).eval(&z) * series(k, w)).sum();
        let mut approx = Complex64::new(0.0, 0.0);
        let mut valid = true;
        for k in 0..basis.degree() {
            let delta = basis.delta(k);
            let dz = dps[k].eval(&z).norm().max(1e-300);
            let mut r = inputs.eps0 / dz * rng.unit().abs();
            let dir = Complex64::from_polar(1.0, PI * rng.unit());
            let mut zh = z + dir * r;
            while (delta.eval(&zh) - delta.eval(&z)).norm() > inputs.eps0 {
                r *= 0.5;
                zh = z + dir * r;
            }
            let wh = w + Complex64::from_polar(inputs.eps1 * rng.unit().abs(), PI * rng.unit());
            if delta.eval(&zh).norm() > d_rho1 || wh.norm() > inputs.rho1 {
                valid = false;
                break;
            }
            approx += delta.eval(&zh) * series(k, wh);
        }
        if !valid {
            rejected += 1;
            continue;
        }
        accepted += 1;
        max_observed = max_observed.max((exact - approx).norm());
    }
    Ok(ContainmentReport { bound, max_observed, accepted, rejected })
}
