//! Aberth–Ehrlich simultaneous root finding and critical levels of `|p|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::FloatPoly;

const MAX_ITER: usize = 500;
const STEP_TOL: f64 = 1e-14;

/// Value and derivative by a joint Horner pass.
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[c.len() - 1];
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev().skip(1) {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Running error bound of Horner's scheme at `z`.
fn horner_rounding_bound(c: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let s = c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
    4.0 * c.len() as f64 * f64::EPSILON * s
}

/// All complex roots of `q` by Aberth–Ehrlich iteration started on a circle
/// whose radius is the Cauchy bound.
pub fn roots_numeric(q: &FloatPoly) -> Result<Vec<Complex64>> {
    let c = q.coeffs();
    let n = match q.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidArgument("root finding needs degree ≥ 1".into())),
    };
    let lead = c[n];
    if n == 1 {
        return Ok(vec![-c[0] / lead]);
    }
    let cauchy = 1.0 + c[..n].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(cauchy, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut max_step = f64::INFINITY;
    for _ in 0..MAX_ITER {
        max_step = 0.0;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() <= horner_rounding_bound(c, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            max_step = max_step.max(step.norm());
            if step.norm() < STEP_TOL * (1.0 + z[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITER, max_step, best: z })
}

/// Roots of `p′`.
pub fn critical_points(p: &FloatPoly) -> Result<Vec<Complex64>> {
    let dp = p.derivative();
    match dp.degree() {
        Some(d) if d >= 1 => roots_numeric(&dp),
        _ => Ok(Vec::new()),
    }
}

fn coefficient_scale(p: &FloatPoly) -> f64 {
    p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Critical points paired with their levels `|p(c)|`, ascending by level.
/// Critical points that are also roots of `p` are skipped.
pub fn critical_levels(p: &FloatPoly) -> Result<Vec<(Complex64, f64)>> {
    let tiny = 1e-13 * coefficient_scale(p);
    let mut out: Vec<(Complex64, f64)> = critical_points(p)?
        .into_iter()
        .map(|c| (c, p.eval(&c).norm()))
        .filter(|&(_, level)| level > tiny)
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(out)
}

/// Smallest critical level of `|p|` (the first level at which any two
/// lemniscate components touch); `+∞` when `p` has no such level.
pub fn first_merge_level(p: &FloatPoly) -> Result<f64> {
    Ok(critical_levels(p)?.first().map_or(f64::INFINITY, |&(_, l)| l))
}

/// Level at which the lemniscate component around `target` first touches a
/// component around another root; `+∞` when that never happens.
pub fn critical_radius(p: &FloatPoly, target: Complex64) -> Result<f64> {
    let roots = roots_numeric(p)?;
    let nearest = |z: Complex64| {
        (0..roots.len())
            .min_by(|&a, &b| (roots[a] - z).norm().total_cmp(&(roots[b] - z).norm()))
            .unwrap_or(0)
    };
    let target_idx = nearest(target);
    let mut parent: Vec<usize> = (0..roots.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for (c, level) in critical_levels(p)? {
        let touching: Vec<usize> = descent_valleys(p, c)
            .into_iter()
            .map(|z0| nearest(flow_to_root(p, z0, c)))
            .collect();
        let target_root = find(&mut parent, target_idx);
        let sets: Vec<usize> = touching.iter().map(|&r| find(&mut parent, r)).collect();
        if sets.contains(&target_root) && sets.iter().any(|&s| s != target_root) {
            return Ok(level);
        }
        for &s in &sets[1..] {
            let a = find(&mut parent, sets[0]);
            parent[s] = a;
        }
    }
    Ok(f64::INFINITY)
}

/// Points near the critical point `c` from which `|p|` descends into each
/// adjacent sublevel component.
fn descent_valleys(p: &FloatPoly, c: Complex64) -> Vec<Complex64> {
    const SAMPLES: usize = 720;
    let pc = p.eval(&c);
    let d2 = p.derivative().derivative().eval(&c);
    let eps = if d2.norm() > 0.0 {
        (2e-4 * pc.norm() / d2.norm()).sqrt()
    } else {
        1e-3 * (1.0 + c.norm())
    };
    let ring: Vec<(Complex64, f64)> = (0..SAMPLES)
        .map(|k| {
            let z = c + Complex64::from_polar(eps, 2.0 * PI * k as f64 / SAMPLES as f64);
            (z, p.eval(&z).norm())
        })
        .collect();
    (0..SAMPLES)
        .filter(|&k| {
            let prev = ring[(k + SAMPLES - 1) % SAMPLES].1;
            let next = ring[(k + 1) % SAMPLES].1;
            let v = ring[k].1;
            v < pc.norm() && v <= prev && v < next
        })
        .map(|k| ring[k].0)
        .collect()
}

/// Follows the Newton flow `ż = −p/p′` (along which `p` shrinks radially) from
/// `start` to the root of the sublevel component containing it.
fn flow_to_root(p: &FloatPoly, start: Complex64, saddle: Complex64) -> Complex64 {
    let c = p.coeffs();
    let mut z = start;
    for _ in 0..200_000 {
        let (v, dv) = eval_with_derivative(c, z);
        if v.norm() <= horner_rounding_bound(c, z) || dv.norm() == 0.0 {
            break;
        }
        let newton = v / dv;
        let cap = 0.25 * (z - saddle).norm();
        let mut step = 0.5 * newton;
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if newton.norm() < 1e-3 * (z - saddle).norm() {
            // Close to the root: plain Newton converges to it.
            for _ in 0..50 {
                let (v, dv) = eval_with_derivative(c, z);
                let s = v / dv;
                if !s.is_finite() {
                    break;
                }
                z -= s;
                if s.norm() < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn fp(c: &[f64]) -> FloatPoly {
        Poly::new(c.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v
    }

    #[test]
    fn cubic_roots() {
        let r = sorted_re(roots_numeric(&fp(&[0.0, 1.0, 0.0, -1.0])).unwrap());
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_roots() {
        let r = sorted_re(critical_points(&fp(&[0.0, 1.0, 0.0, -1.0])).unwrap());
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0].re + s).abs() < 1e-14 && (r[1].re - s).abs() < 1e-14);
        let r = sorted_re(critical_points(&fp(&[0.0, 5.0, 4.0, 1.0])).unwrap());
        assert!((r[0] - Complex64::new(-5.0 / 3.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn residuals_are_small() {
        // Roots inside the unit disk: residual against the coefficient scale.
        let roots: Vec<Complex64> = (0..7)
            .map(|k| Complex64::from_polar(0.3 + 0.1 * k as f64, 1.3 * k as f64))
            .collect();
        let q = Poly::from_roots(&roots, Complex64::new(2.0, -1.0));
        let scale = coefficient_scale(&q);
        for r in roots_numeric(&q).unwrap() {
            assert!(q.eval(&r).norm() <= 1e-12 * scale);
        }
        // Badly scaled roots: residual at the Horner rounding level.
        let q = fp(&[3.0, -2.0, 0.5, 7.0, -1.0, 2.0, 0.25]);
        for r in roots_numeric(&q).unwrap() {
            assert!(q.eval(&r).norm() <= horner_rounding_bound(q.coeffs(), r));
        }
    }

    #[test]
    fn rejects_constants() {
        assert!(roots_numeric(&fp(&[1.0])).is_err());
    }

    #[test]
    fn critical_radius_examples() {
        let ex1 = fp(&[0.0, 1.0, 0.0, -1.0]);
        let want = 2.0 / (3.0 * 3f64.sqrt());
        let got = critical_radius(&ex1, Complex64::new(0.0, 0.0)).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!((got - 0.3849).abs() < 1e-4);

        let ex2 = fp(&[0.0, 5.0, 4.0, 1.0]);
        let got = critical_radius(&ex2, Complex64::new(0.0, 0.0)).unwrap();
        assert!((got - 2.0).abs() < 1e-12, "{got}");
        // The two conjugate roots merge earlier, at |p(−5/3)| = 50/27.
        assert!((first_merge_level(&ex2).unwrap() - 50.0 / 27.0).abs() < 1e-12);
        let got = critical_radius(&ex2, Complex64::new(-2.0, 1.0)).unwrap();
        assert!((got - 50.0 / 27.0).abs() < 1e-12);

        let lin = fp(&[0.0, 1.0]);
        assert_eq!(critical_radius(&lin, Complex64::new(0.0, 0.0)).unwrap(), f64::INFINITY);
    }
}
