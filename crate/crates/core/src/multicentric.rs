//! Multicentric representations `φ(z) = Σ_k δ_k(z) f_k(p(z))` with truncated
//! series `f_k`, the indicator case computed by residues or by the
//! idempotency recursion, and conversion to and from plain polynomials.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactarith::{GaussianRational, Scalar};
use crate::poly::{LagrangeBasis, Poly, TruncatedSeries};

/// A `d × (n+1)` table of series coefficients `α_{k,j}` over a Lagrange basis.
#[derive(Clone, PartialEq, Debug)]
pub struct MulticentricRep<S> {
    basis: LagrangeBasis<S>,
    coeffs: Vec<Vec<S>>,
}

pub type ExactRep = MulticentricRep<GaussianRational>;
pub type FloatRep = MulticentricRep<Complex64>;

/// The piecewise-constant function equal to 1 on the component of
/// `basis.node(target)` and 0 on the others.
#[derive(Clone, Debug)]
pub struct IndicatorSpec<S> {
    pub basis: LagrangeBasis<S>,
    pub target: usize,
}

impl<S: Scalar> IndicatorSpec<S> {
    pub fn new(basis: LagrangeBasis<S>, target: usize) -> Result<Self> {
        if target >= basis.degree() {
            return Err(Error::InvalidArgument(format!(
                "target component {} out of range 1..={}",
                target + 1,
                basis.degree()
            )));
        }
        Ok(Self { basis, target })
    }
}

/// How indicator coefficients are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicatorMethod {
    Residues,
    Recursion,
}

impl<S: Scalar> MulticentricRep<S> {
    /// Every row must have the same length `n + 1`, one row per node.
    pub fn new(basis: LagrangeBasis<S>, coeffs: Vec<Vec<S>>) -> Result<Self> {
        if coeffs.len() != basis.degree() {
            return Err(Error::DimensionMismatch { expected: basis.degree(), got: coeffs.len() });
        }
        let len = coeffs[0].len();
        if len == 0 {
            return Err(Error::InvalidArgument("series need at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|row| row.len() != len) {
            return Err(Error::DimensionMismatch { expected: len, got: bad.len() });
        }
        Ok(Self { basis, coeffs })
    }

    pub fn basis(&self) -> &LagrangeBasis<S> {
        &self.basis
    }

    /// Truncation order `n`.
    pub fn order(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn components(&self) -> &[Vec<S>] {
        &self.coeffs
    }

    pub fn component(&self, k: usize) -> &[S] {
        &self.coeffs[k]
    }

    pub fn coeff(&self, k: usize, j: usize) -> &S {
        &self.coeffs[k][j]
    }

    /// Keeps `w^0 … w^order` (pads with zeros when extending).
    pub fn truncate(&self, order: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| TruncatedSeries::new(row.clone(), order).into_coeffs())
            .collect();
        Self { basis: self.basis.clone(), coeffs }
    }

    /// Fully expanded `Σ_k δ_k(z) Σ_j α_{k,j} p(z)^j`.
    pub fn to_plain(&self) -> Poly<S> {
        self.coeffs
            .iter()
            .zip(self.basis.deltas())
            .fold(Poly::zero(), |acc, (row, delta)| {
                let series = Poly::new(row.clone()).compose(self.basis.p());
                &acc + &(delta * &series)
            })
    }

    /// Evaluation in multicentric order: `δ_k(z)`, then `w = p(z)`, then each
    /// series at `w` by Horner, then the combination.
    pub fn eval(&self, z: &S) -> S {
        let w = self.basis.p().eval(z);
        self.coeffs
            .iter()
            .zip(self.basis.deltas())
            .fold(S::zero(), |acc, (row, delta)| {
                let series = row
                    .iter()
                    .rev()
                    .skip(1)
                    .fold(row[row.len() - 1].clone(), |s, c| s * w.clone() + c.clone());
                acc + delta.eval(z) * series
            })
    }

    /// Linear combination of representations sharing basis and order.
    pub fn combine(weights: &[S], reps: &[&Self]) -> Result<Self> {
        let first = reps.first().ok_or(Error::IncompatibleRepresentations)?;
        if weights.len() != reps.len() {
            return Err(Error::DimensionMismatch { expected: reps.len(), got: weights.len() });
        }
        if reps.iter().any(|r| r.basis != first.basis || r.order() != first.order()) {
            return Err(Error::IncompatibleRepresentations);
        }
        let coeffs = (0..first.basis.degree())
            .map(|k| {
                (0..=first.order())
                    .map(|j| {
                        reps.iter().zip(weights).fold(S::zero(), |acc, (r, wt)| {
                            acc + wt.clone() * r.coeffs[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { basis: first.basis.clone(), coeffs })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> MulticentricRep<T> {
        MulticentricRep {
            basis: self.basis.map(f),
            coeffs: self.coeffs.iter().map(|row| row.iter().map(f).collect()).collect(),
        }
    }
}

impl ExactRep {
    pub fn to_float(&self) -> Result<FloatRep> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(GaussianRational::to_float).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(MulticentricRep { basis: self.basis.to_float()?, coeffs })
    }

    /// One `component order value` line per coefficient (1-based component).
    pub fn to_golden(&self) -> String {
        let mut out = String::new();
        for (k, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let _ = writeln!(out, "{} {} {}", k + 1, j, c);
            }
        }
        out
    }
}

/// Parses the golden-data format into a `d × (n+1)` table. Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_golden(text: &str) -> Result<Vec<Vec<GaussianRational>>> {
    let err = |line: &str| Error::Parse { what: "golden coefficient line", input: line.to_string() };
    let mut entries = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut parts = line.splitn(3, char::is_whitespace);
        let k: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err(line))?;
        let j: usize = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| err(line))?;
        let v: GaussianRational = parts.next().ok_or_else(|| err(line))?.parse()?;
        if k == 0 {
            return Err(err(line));
        }
        entries.push((k - 1, j, v));
    }
    let d = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let len = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let mut table = vec![vec![None; len]; d];
    for (k, j, v) in entries {
        table[k][j] = Some(v);
    }
    table
        .into_iter()
        .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("golden table has missing entries".into()))
}

/// Indicator coefficients from the residues at the target node, computed with
/// truncated series around `λ_j`: write `p(λ_j + t) = t·q(t)`, invert `q`, raise
/// to the `m`-th power and read off `α_{j,m} = [t^m] q^{−m}` and, for `k ≠ j`,
/// `α_{k,m} = [t^{m−1}] q^{−m} / (t + λ_j − λ_k)`.
pub fn indicator_coeffs_residues<S: Scalar>(spec: &IndicatorSpec<S>, n: usize) -> Result<MulticentricRep<S>> {
    let basis = &spec.basis;
    let j = spec.target;
    let d = basis.degree();
    let lj = basis.node(j);
    let shifted = basis.p().shift(lj);
    let q = Poly::new(shifted.coeffs().iter().skip(1).cloned().collect());
    let h = TruncatedSeries::from_poly(&q, n).reciprocal()?;
    let pole: Vec<Option<TruncatedSeries<S>>> = (0..d)
        .map(|k| {
            (k != j)
                .then(|| {
                    let lin = Poly::new(vec![lj.clone() - basis.node(k).clone(), S::one()]);
                    TruncatedSeries::from_poly(&lin, n).reciprocal()
                })
                .transpose()
        })
        .collect::<Result<_>>()?;

    let mut coeffs = vec![vec![S::zero(); n + 1]; d];
    coeffs[j][0] = S::one();
    let mut power = TruncatedSeries::one(n);
    for m in 1..=n {
        power = power.mul(&h);
        for (k, row) in coeffs.iter_mut().enumerate() {
            row[m] = match &pole[k] {
                None => power.coeff(m).clone(),
                Some(r) => (0..m).fold(S::zero(), |acc, i| {
                    acc + r.coeff(i).clone() * power.coeff(m - 1 - i).clone()
                }),
            };
        }
    }
    MulticentricRep::new(basis.clone(), coeffs)
}

/// `σ_{km} = 1/((λ_k − λ_m) p′(λ_m))`.
fn sigma<S: Scalar>(basis: &LagrangeBasis<S>) -> Result<Vec<Vec<S>>> {
    let d = basis.degree();
    (0..d)
        .map(|k| {
            (0..d)
                .map(|m| {
                    if k == m {
                        return Ok(S::zero());
                    }
                    let den = (basis.node(k).clone() - basis.node(m).clone()) * basis.dp(m).clone();
                    den.inv().ok_or(Error::DivisionByZero)
                })
                .collect()
        })
        .collect()
}

/// Indicator coefficients from the idempotency of `χ`: each new order is solved
/// from the lower orders of all components.
pub fn indicator_coeffs_recursion<S: Scalar>(spec: &IndicatorSpec<S>, n: usize) -> Result<MulticentricRep<S>> {
    let basis = &spec.basis;
    let d = basis.degree();
    let sigma = sigma(basis)?;
    let mut a = vec![vec![S::zero(); n + 1]; d];
    a[spec.target][0] = S::one();
    let pivots: Vec<S> = (0..d)
        .map(|k| (S::one() - S::from_integer(2) * a[k][0].clone()).inv().ok_or(Error::DivisionByZero))
        .collect::<Result<_>>()?;
    for m in 0..n {
        let next: Vec<S> = (0..d)
            .map(|k| {
                let own = (1..=m).fold(S::zero(), |acc, l| acc + a[k][l].clone() * a[k][m + 1 - l].clone());
                let cross = (0..d).filter(|&i| i != k).fold(S::zero(), |acc, i| {
                    let inner = (0..=m).fold(S::zero(), |s, l| {
                        s + (a[k][l].clone() - a[i][l].clone()) * (a[k][m - l].clone() - a[i][m - l].clone())
                    });
                    acc + sigma[k][i].clone() * inner
                });
                (own - cross) * pivots[k].clone()
            })
            .collect();
        for (k, v) in next.into_iter().enumerate() {
            a[k][m + 1] = v;
        }
    }
    MulticentricRep::new(basis.clone(), a)
}

pub fn indicator_coeffs<S: Scalar>(
    spec: &IndicatorSpec<S>,
    n: usize,
    method: IndicatorMethod,
) -> Result<MulticentricRep<S>> {
    match method {
        IndicatorMethod::Residues => indicator_coeffs_residues(spec, n),
        IndicatorMethod::Recursion => indicator_coeffs_recursion(spec, n),
    }
}

/// One step `Z_j ← λ_j Z_j + w Σ_l Z_l / p′(λ_l)` of the power recursion,
/// truncated at the common order.
fn zpow_step<S: Scalar>(basis: &LagrangeBasis<S>, inv_dp: &[S], z: &[Vec<S>]) -> Vec<Vec<S>> {
    let len = z[0].len();
    let mixed: Vec<S> = (0..len)
        .map(|j| z.iter().zip(inv_dp).fold(S::zero(), |acc, (row, c)| acc + row[j].clone() * c.clone()))
        .collect();
    z.iter()
        .enumerate()
        .map(|(k, row)| {
            (0..len)
                .map(|j| {
                    let shifted = if j == 0 { S::zero() } else { mixed[j - 1].clone() };
                    basis.node(k).clone() * row[j].clone() + shifted
                })
                .collect()
        })
        .collect()
}

fn inverse_dp<S: Scalar>(basis: &LagrangeBasis<S>) -> Result<Vec<S>> {
    basis.dps().iter().map(|v| v.inv().ok_or(Error::DivisionByZero)).collect()
}

/// Representation of `z^k` truncated at order `n`.
pub fn zpow_rep<S: Scalar>(basis: &LagrangeBasis<S>, k: usize, n: usize) -> Result<MulticentricRep<S>> {
    let inv_dp = inverse_dp(basis)?;
    let mut z = vec![TruncatedSeries::<S>::one(n).into_coeffs(); basis.degree()];
    for _ in 0..k {
        z = zpow_step(basis, &inv_dp, &z);
    }
    MulticentricRep::new(basis.clone(), z)
}

/// Termwise conversion `Σ_k c_k Z^{⊛k}` of a plain polynomial.
pub fn from_plain<S: Scalar>(q: &Poly<S>, basis: &LagrangeBasis<S>, n: usize) -> Result<MulticentricRep<S>> {
    let inv_dp = inverse_dp(basis)?;
    let d = basis.degree();
    let mut z = vec![TruncatedSeries::<S>::one(n).into_coeffs(); d];
    let mut acc = vec![vec![S::zero(); n + 1]; d];
    for (k, c) in q.coeffs().iter().enumerate() {
        if k > 0 {
            z = zpow_step(basis, &inv_dp, &z);
        }
        if c.is_zero() {
            continue;
        }
        for (arow, zrow) in acc.iter_mut().zip(&z) {
            for (a, v) in arow.iter_mut().zip(zrow) {
                *a = a.clone() + c.clone() * v.clone();
            }
        }
    }
    MulticentricRep::new(basis.clone(), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn row(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&x| g(x, 0)).collect()
    }

    #[test]
    fn first_recursion_step_matches_hand_computation() {
        let spec = presets::example1();
        let s = sigma(&spec.basis).unwrap();
        assert_eq!(s[0][1], GaussianRational::from_fracs(-1, 2, 0, 1));
        assert_eq!(s[0][2], GaussianRational::from_fracs(1, 2, 0, 1));
        assert_eq!(s[1][0], g(-1, 0));
        let rep = indicator_coeffs_recursion(&spec, 1).unwrap();
        assert_eq!(rep.coeff(0, 1), &g(0, 0));
        // Residue calculus gives +1 here.
        assert_eq!(rep.coeff(1, 1), &g(1, 0));
        assert_eq!(rep.coeff(2, 1), &g(-1, 0));
    }

    #[test]
    fn single_node_indicator_is_constant_one() {
        let basis = LagrangeBasis::new(vec![g(0, 0)]).unwrap();
        let spec = IndicatorSpec::new(basis, 0).unwrap();
        for n in [0, 1, 5] {
            let rep = indicator_coeffs_residues(&spec, n).unwrap();
            let mut want = row(&[1]);
            want.resize(n + 1, g(0, 0));
            assert_eq!(rep.component(0), &want[..]);
            assert_eq!(indicator_coeffs_recursion(&spec, n).unwrap(), rep);
        }
    }

    #[test]
    fn target_out_of_range() {
        let spec = presets::example1();
        assert!(IndicatorSpec::new(spec.basis.clone(), 3).is_err());
    }

    #[test]
    fn powers_of_z() {
        let basis = presets::example1().basis;
        let z2 = zpow_rep(&basis, 2, 3).unwrap();
        for k in 0..3 {
            let mut want = vec![basis.node(k).clone() * basis.node(k).clone()];
            want.resize(4, g(0, 0));
            assert_eq!(z2.component(k), &want[..]);
        }
        let z3 = zpow_rep(&basis, 3, 3).unwrap();
        let z4 = zpow_rep(&basis, 4, 3).unwrap();
        for k in 0..3 {
            let l = basis.node(k).clone();
            assert_eq!(z3.component(k), &[Scalar::pow(&l, 3), g(-1, 0), g(0, 0), g(0, 0)][..]);
            assert_eq!(z4.component(k), &[Scalar::pow(&l, 4), -l.clone(), g(0, 0), g(0, 0)][..]);
        }
    }

    #[test]
    fn plain_conversions() {
        let basis = presets::example1().basis;
        let h: Poly<GaussianRational> = Poly::new(row(&[1, 0, -2, 0, 1]));
        let rep = from_plain(&h, &basis, 1).unwrap();
        assert_eq!(rep.components(), &[row(&[1, 0]), row(&[0, 1]), row(&[0, -1])][..]);
        assert_eq!(rep.to_plain(), h);

        let one = from_plain(&Poly::one(), &basis, 4).unwrap();
        assert!(one.components().iter().all(|r| r == &row(&[1, 0, 0, 0, 0])));
        let p = from_plain(basis.p(), &basis, 3).unwrap();
        assert!(p.components().iter().all(|r| r == &row(&[0, 1, 0, 0])));
    }

    #[test]
    fn order_zero_truncation_is_the_lagrange_polynomial() {
        for spec in [presets::example1(), presets::example2()] {
            let rep = indicator_coeffs_residues(&spec, 6).unwrap().truncate(0);
            assert_eq!(rep.to_plain(), spec.basis.delta(spec.target).clone());
        }
    }

    #[test]
    fn exact_eval_matches_expansion() {
        let spec = presets::example2();
        let rep = indicator_coeffs_residues(&spec, 5).unwrap();
        let plain = rep.to_plain();
        for z in [g(0, 0), GaussianRational::from_fracs(1, 7, -2, 9), g(-2, 1)] {
            assert_eq!(rep.eval(&z), plain.eval(&z));
        }
        assert_eq!(rep.eval(&g(0, 0)), g(1, 0));
        assert_eq!(rep.eval(&g(-2, -1)), g(0, 0));
    }

    #[test]
    fn combine_checks_shapes() {
        let spec = presets::example1();
        let a = indicator_coeffs_residues(&spec, 3).unwrap();
        let b = indicator_coeffs_residues(&spec, 4).unwrap();
        assert_eq!(
            MulticentricRep::combine(&[g(1, 0), g(1, 0)], &[&a, &b]),
            Err(Error::IncompatibleRepresentations)
        );
        assert!(MulticentricRep::combine(&[g(1, 0)], &[&a, &a]).is_err());
        assert_eq!(MulticentricRep::combine(&[g(1, 0)], &[&a]).unwrap(), a);
    }

    #[test]
    fn golden_round_trip() {
        let rep = indicator_coeffs_residues(&presets::example2(), 4).unwrap();
        let table = parse_golden(&rep.to_golden()).unwrap();
        assert_eq!(table, rep.components());
        assert!(parse_golden("1 0 1\n1 2 3\n").is_err());
        assert!(parse_golden("0 0 1\n").is_err());
    }
}
