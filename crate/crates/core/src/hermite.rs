//! The indicator Hermite basis polynomial in four evaluation forms.
//!
//! All four forms are the same polynomial of degree `≤ d(n+1) − 1`: value 1 and
//! vanishing derivatives `1..=n` at the target node, vanishing value and
//! derivatives `0..=n` at the other nodes.
//!
//! * `H`: plain monomial coefficients.
//! * `S`: `δ^{n+1} · ⌊δ^{−n−1}⌋_n`, the cofactor stored in `t = z − λ`.
//! * `T`: `δ^{n+1} · Σ_k s_k(t)` with `s_k(t) = Σ_m c_{k,m} t^m / m!` and
//!   columns `c_k = (I − Λ)^{k−1} e_1`, `k = 1..=n+1`.
//! * `M`: the multicentric series table.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evalerr::{horner_noisy, ErrorModel};
use crate::exactarith::{BigRational, GaussianRational, Scalar};
use crate::multicentric::{from_plain, indicator_coeffs_residues, IndicatorSpec, MulticentricRep};
use crate::poly::{LagrangeBasis, Poly, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReprKind {
    Multicentric,
    Special,
    Parallel,
    Hermite,
}

impl ReprKind {
    pub const ALL: [ReprKind; 4] = [ReprKind::Multicentric, ReprKind::Special, ReprKind::Parallel, ReprKind::Hermite];

    pub fn tag(self) -> char {
        match self {
            ReprKind::Multicentric => 'M',
            ReprKind::Special => 'S',
            ReprKind::Parallel => 'T',
            ReprKind::Hermite => 'H',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReprKind::Multicentric => "Multicentric",
            ReprKind::Special => "Special",
            ReprKind::Parallel => "Parallel",
            ReprKind::Hermite => "Hermite",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag.trim() {
            "M" | "m" => Ok(ReprKind::Multicentric),
            "S" | "s" => Ok(ReprKind::Special),
            "T" | "t" => Ok(ReprKind::Parallel),
            "H" | "h" => Ok(ReprKind::Hermite),
            other => Err(Error::Parse { what: "representation kind", input: other.to_string() }),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Payload<S> {
    Hermite { poly: Poly<S> },
    /// Cofactor in `t = z − λ_target`.
    Special { cofactor: Poly<S> },
    /// `columns[k][m] = c_{k+1,m+1}`, `weights[m] = 1/m!`.
    Parallel { columns: Vec<Vec<S>>, weights: Vec<S> },
    Multicentric { rep: MulticentricRep<S> },
}

/// One of the four forms of the indicator basis polynomial of order `n`.
///
/// `target` is `None` only for linear combinations of indicators.
#[derive(Clone, PartialEq, Debug)]
pub struct BasisRepresentation<S> {
    basis: LagrangeBasis<S>,
    target: Option<usize>,
    order: usize,
    payload: Payload<S>,
}

/// Derivative data `a_{k,ν} = P^{(ν)}(λ_k)`, one row per node.
#[derive(Clone, PartialEq, Debug)]
pub struct HermiteData<S> {
    table: Vec<Vec<S>>,
}

impl<S: Scalar> HermiteData<S> {
    pub fn new(table: Vec<Vec<S>>) -> Result<Self> {
        let len = table.first().map(Vec::len).unwrap_or(0);
        if len == 0 {
            return Err(Error::InvalidArgument("Hermite data needs at least one node and one value".into()));
        }
        if let Some(bad) = table.iter().find(|r| r.len() != len) {
            return Err(Error::DimensionMismatch { expected: len, got: bad.len() });
        }
        Ok(Self { table })
    }

    /// Data `a_{k0,0} = 1`, everything else zero.
    pub fn indicator(d: usize, target: usize, n: usize) -> Result<Self> {
        if target >= d {
            return Err(Error::InvalidArgument(format!("target {} out of range 1..={d}", target + 1)));
        }
        let mut table = vec![vec![S::zero(); n + 1]; d];
        table[target][0] = S::one();
        Self::new(table)
    }

    /// The values and derivatives `0..=n` of `q` at every node.
    pub fn from_poly(q: &Poly<S>, basis: &LagrangeBasis<S>, n: usize) -> Self {
        let table = basis.nodes().iter().map(|l| derivatives_at(q, l, n)).collect();
        Self { table }
    }

    pub fn nodes(&self) -> usize {
        self.table.len()
    }

    pub fn order(&self) -> usize {
        self.table[0].len() - 1
    }

    pub fn row(&self, k: usize) -> &[S] {
        &self.table[k]
    }
}

/// `q^{(ν)}(at)` for `ν = 0..=n`.
pub fn derivatives_at<S: Scalar>(q: &Poly<S>, at: &S, n: usize) -> Vec<S> {
    let shifted = q.shift(at);
    let mut fact = BigInt::from(1);
    (0..=n)
        .map(|m| {
            if m > 0 {
                fact *= m;
            }
            shifted.coeff(m) * S::from_rational(&BigRational::from_integer(fact.clone()))
        })
        .collect()
}

fn big_scalar<S: Scalar>(v: &BigInt) -> S {
    S::from_rational(&BigRational::from_integer(v.clone()))
}

/// `1/m!` for `m = 0..=n`.
fn factorial_weights<S: Scalar>(n: usize) -> Vec<S> {
    let mut fact = BigInt::from(1);
    (0..=n)
        .map(|m| {
            if m > 0 {
                fact *= m;
            }
            S::from_rational(&BigRational::new(BigInt::from(1), fact.clone()))
        })
        .collect()
}

/// `x ↦ x − λ` as a polynomial.
fn shift_poly<S: Scalar>(center: &S) -> Poly<S> {
    Poly::new(vec![-center.clone(), S::one()])
}

/// Taylor coefficients of `δ_j^{n+1}` at `λ_j`, through `t^n`.
fn power_taylor<S: Scalar>(basis: &LagrangeBasis<S>, j: usize, n: usize) -> TruncatedSeries<S> {
    let local = basis.delta(j).shift(basis.node(j));
    TruncatedSeries::from_poly(&local, n).pow(n + 1)
}

/// The vectors `(I − Λ_j)^{k−1} a` for `k = 1..=n+1`, where
/// `Λ_j[a][b] = binom(a, b)·L^{(a−b)}(λ_j) = (a!/b!)·ℓ_{a−b}` (0-based) and
/// `ℓ` are the Taylor coefficients of `L = δ_j^{n+1}`.
fn kechriniotis_columns<S: Scalar>(basis: &LagrangeBasis<S>, j: usize, a: &[S]) -> Vec<Vec<S>> {
    let n = a.len() - 1;
    let ell = power_taylor(basis, j, n);
    // I − Λ is strictly lower triangular since ℓ_0 = 1.
    let mut strict = vec![vec![S::zero(); n + 1]; n + 1];
    for (row, out) in strict.iter_mut().enumerate() {
        let mut falling = BigInt::from(1);
        for col in (0..row).rev() {
            falling *= col + 1;
            let l = ell.coeff(row - col);
            if !l.is_zero() {
                out[col] = -(big_scalar::<S>(&falling) * l.clone());
            }
        }
    }
    let mut cols = Vec::with_capacity(n + 1);
    cols.push(a.to_vec());
    for _ in 0..n {
        let prev = cols.last().unwrap();
        let next = strict
            .iter()
            .map(|row| {
                row.iter()
                    .zip(prev)
                    .filter(|(m, _)| !m.is_zero())
                    .fold(S::zero(), |acc, (m, v)| acc + m.clone() * v.clone())
            })
            .collect();
        cols.push(next);
    }
    cols
}

/// `Σ_m v_m t^m w_m` as a polynomial in `t`.
fn weighted_poly<S: Scalar>(v: &[S], weights: &[S]) -> Poly<S> {
    Poly::new(v.iter().zip(weights).map(|(c, w)| c.clone() * w.clone()).collect())
}

fn check_target<S: Scalar>(basis: &LagrangeBasis<S>, k0: usize) -> Result<()> {
    IndicatorSpec::new(basis.clone(), k0).map(|_| ())
}

pub fn build_s<S: Scalar>(basis: &LagrangeBasis<S>, k0: usize, n: usize) -> Result<BasisRepresentation<S>> {
    check_target(basis, k0)?;
    let local = basis.delta(k0).shift(basis.node(k0));
    let cofactor = TruncatedSeries::from_poly(&local, n).pow(n + 1).reciprocal()?.to_poly();
    Ok(BasisRepresentation { basis: basis.clone(), target: Some(k0), order: n, payload: Payload::Special { cofactor } })
}

pub fn build_t<S: Scalar>(basis: &LagrangeBasis<S>, k0: usize, n: usize) -> Result<BasisRepresentation<S>> {
    check_target(basis, k0)?;
    let mut e1 = vec![S::zero(); n + 1];
    e1[0] = S::one();
    let columns = kechriniotis_columns(basis, k0, &e1);
    Ok(BasisRepresentation {
        basis: basis.clone(),
        target: Some(k0),
        order: n,
        payload: Payload::Parallel { columns, weights: factorial_weights(n) },
    })
}

/// The Hermite interpolant `Σ_j Σ_k X_j (I − Λ_j)^{k−1} A_j` of arbitrary data.
pub fn build_t_general<S: Scalar>(basis: &LagrangeBasis<S>, data: &HermiteData<S>) -> Result<Poly<S>> {
    if data.nodes() != basis.degree() {
        return Err(Error::DimensionMismatch { expected: basis.degree(), got: data.nodes() });
    }
    let n = data.order();
    let weights = factorial_weights::<S>(n);
    let mut h = Poly::zero();
    for j in 0..basis.degree() {
        if data.row(j).iter().all(S::is_zero) {
            continue;
        }
        let cols = kechriniotis_columns(basis, j, data.row(j));
        let sum = cols.iter().fold(vec![S::zero(); n + 1], |acc, c| {
            acc.into_iter().zip(c).map(|(a, b)| a + b.clone()).collect()
        });
        let s = weighted_poly(&sum, &weights).compose(&shift_poly(basis.node(j)));
        h = &h + &(&basis.delta(j).pow(n + 1) * &s);
    }
    Ok(h)
}

pub fn build_h<S: Scalar>(basis: &LagrangeBasis<S>, k0: usize, n: usize) -> Result<BasisRepresentation<S>> {
    let poly = build_s(basis, k0, n)?.expand();
    Ok(BasisRepresentation { basis: basis.clone(), target: Some(k0), order: n, payload: Payload::Hermite { poly } })
}

pub fn build_m<S: Scalar>(basis: &LagrangeBasis<S>, k0: usize, n: usize) -> Result<BasisRepresentation<S>> {
    let rep = indicator_coeffs_residues(&IndicatorSpec::new(basis.clone(), k0)?, n)?;
    Ok(BasisRepresentation { basis: basis.clone(), target: Some(k0), order: n, payload: Payload::Multicentric { rep } })
}

pub fn build<S: Scalar>(kind: ReprKind, basis: &LagrangeBasis<S>, k0: usize, n: usize) -> Result<BasisRepresentation<S>> {
    match kind {
        ReprKind::Multicentric => build_m(basis, k0, n),
        ReprKind::Special => build_s(basis, k0, n),
        ReprKind::Parallel => build_t(basis, k0, n),
        ReprKind::Hermite => build_h(basis, k0, n),
    }
}

impl<S: Scalar> BasisRepresentation<S> {
    pub fn kind(&self) -> ReprKind {
        match self.payload {
            Payload::Hermite { .. } => ReprKind::Hermite,
            Payload::Special { .. } => ReprKind::Special,
            Payload::Parallel { .. } => ReprKind::Parallel,
            Payload::Multicentric { .. } => ReprKind::Multicentric,
        }
    }

    pub fn basis(&self) -> &LagrangeBasis<S> {
        &self.basis
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn payload(&self) -> &Payload<S> {
        &self.payload
    }

    fn center(&self) -> Result<(usize, &S)> {
        let k0 = self.target.ok_or(Error::IncompatibleRepresentations)?;
        Ok((k0, self.basis.node(k0)))
    }

    /// The represented polynomial in plain monomial form.
    pub fn expand(&self) -> Poly<S> {
        let factor = |k0: usize| self.basis.delta(k0).pow(self.order + 1);
        match (&self.payload, self.target) {
            (Payload::Hermite { poly }, _) => poly.clone(),
            (Payload::Multicentric { rep }, _) => rep.to_plain(),
            (Payload::Special { cofactor }, Some(k0)) => {
                &factor(k0) * &cofactor.compose(&shift_poly(self.basis.node(k0)))
            }
            (Payload::Parallel { columns, weights }, Some(k0)) => {
                let sum = columns
                    .iter()
                    .fold(Poly::zero(), |acc, c| &acc + &weighted_poly(c, weights));
                &factor(k0) * &sum.compose(&shift_poly(self.basis.node(k0)))
            }
            _ => unreachable!("factored forms always carry a target"),
        }
    }

    /// The same polynomial as a multicentric table of the same order.
    pub fn to_multicentric(&self) -> Result<MulticentricRep<S>> {
        match &self.payload {
            Payload::Multicentric { rep } => Ok(rep.clone()),
            _ => from_plain(&self.expand(), &self.basis, self.order),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> BasisRepresentation<T> {
        let row = |v: &[S]| v.iter().map(f).collect::<Vec<T>>();
        let payload = match &self.payload {
            Payload::Hermite { poly } => Payload::Hermite { poly: poly.map(f) },
            Payload::Special { cofactor } => Payload::Special { cofactor: cofactor.map(f) },
            Payload::Parallel { columns, weights } => Payload::Parallel {
                columns: columns.iter().map(|c| row(c)).collect(),
                weights: row(weights),
            },
            Payload::Multicentric { rep } => Payload::Multicentric { rep: rep.map(f) },
        };
        BasisRepresentation { basis: self.basis.map(f), target: self.target, order: self.order, payload }
    }
}

/// Linear combination of indicator representations, returned in multicentric
/// form. All inputs must share basis and order.
pub fn combine_indicators<S: Scalar>(
    weights: &[S],
    reps: &[&BasisRepresentation<S>],
) -> Result<BasisRepresentation<S>> {
    let first = reps.first().ok_or(Error::IncompatibleRepresentations)?;
    if reps.iter().any(|r| r.basis != first.basis || r.order != first.order) {
        return Err(Error::IncompatibleRepresentations);
    }
    let tables = reps.iter().map(|r| r.to_multicentric()).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&MulticentricRep<S>> = tables.iter().collect();
    let rep = MulticentricRep::combine(weights, &refs)?;
    let single = weights.iter().filter(|w| !w.is_zero()).count() == 1;
    let target = if single {
        weights
            .iter()
            .position(|w| !w.is_zero())
            .filter(|&i| weights[i] == S::one())
            .and_then(|i| reps[i].target)
    } else {
        None
    };
    Ok(BasisRepresentation { basis: first.basis.clone(), target, order: first.order, payload: Payload::Multicentric { rep } })
}

impl BasisRepresentation<GaussianRational> {
    pub fn to_float(&self) -> Result<BasisRepresentation<Complex64>> {
        let conv = |v: &[GaussianRational]| v.iter().map(GaussianRational::to_float).collect::<Result<Vec<_>>>();
        let payload = match &self.payload {
            Payload::Hermite { poly } => Payload::Hermite { poly: poly.to_float()? },
            Payload::Special { cofactor } => Payload::Special { cofactor: cofactor.to_float()? },
            Payload::Parallel { columns, weights } => Payload::Parallel {
                columns: columns.iter().map(|c| conv(c)).collect::<Result<_>>()?,
                weights: conv(weights)?,
            },
            Payload::Multicentric { rep } => Payload::Multicentric { rep: rep.to_float()? },
        };
        Ok(BasisRepresentation { basis: self.basis.to_float()?, target: self.target, order: self.order, payload })
    }

    /// Text dump: a header naming kind, order, target and basis, then the
    /// payload in the polynomial and golden-table formats.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |v: &[GaussianRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "kind {}", self.kind().tag());
        let _ = writeln!(out, "order {}", self.order);
        match self.target {
            Some(k) => {
                let _ = writeln!(out, "target {}", k + 1);
            }
            None => {
                let _ = writeln!(out, "target none");
            }
        }
        let _ = writeln!(out, "nodes: {}", join(self.basis.nodes()));
        let lead = self.basis.p().leading().cloned().unwrap_or_else(GaussianRational::one);
        let _ = writeln!(out, "lead: {lead}");
        match &self.payload {
            Payload::Hermite { poly } => {
                let _ = writeln!(out, "poly: {poly}");
            }
            Payload::Special { cofactor } => {
                let k0 = self.target.unwrap_or(0);
                let _ = writeln!(out, "delta: {}", self.basis.delta(k0));
                let _ = writeln!(out, "power: {}", self.order + 1);
                let _ = writeln!(out, "cofactor: {cofactor}");
            }
            Payload::Parallel { columns, weights } => {
                let k0 = self.target.unwrap_or(0);
                let _ = writeln!(out, "delta: {}", self.basis.delta(k0));
                let _ = writeln!(out, "power: {}", self.order + 1);
                let _ = writeln!(out, "weights: {}", join(weights));
                for (k, c) in columns.iter().enumerate() {
                    let _ = writeln!(out, "column {}: {}", k + 1, join(c));
                }
            }
            Payload::Multicentric { rep } => out.push_str(&rep.to_golden()),
        }
        out
    }
}

/// Error injection for one representation evaluation: the model plus the
/// context labels that identify this evaluation. Each constituent polynomial
/// draws from the stream keyed by these labels followed by its own index.
#[derive(Clone, Copy, Debug)]
pub struct EvalNoise<'a> {
    pub model: &'a ErrorModel,
    pub context: &'a [u64],
}

fn horner(coeffs: &[Complex64], z: Complex64, noise: Option<EvalNoise<'_>>, constituent: u64) -> Result<Complex64> {
    let value = match noise {
        Some(nz) if !nz.model.is_noiseless() => {
            let mut labels = nz.context.to_vec();
            labels.push(constituent);
            return horner_noisy(coeffs, z, nz.model, &mut nz.model.stream(&labels));
        }
        _ => match coeffs.split_last() {
            Some((&lead, rest)) => rest.iter().rev().fold(lead, |acc, &c| acc * z + c),
            None => Complex64::new(0.0, 0.0),
        },
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite)
    }
}

/// `v^k` by `k − 1` successive multiplications.
fn repeated_power(v: Complex64, k: usize) -> Complex64 {
    (1..k).fold(v, |acc, _| acc * v)
}

/// Evaluates following the representation's own structure, every constituent
/// polynomial by Horner's scheme. Constituent indices: `H` uses 0; `S` uses 0
/// for `δ` and 1 for the cofactor; `T` uses 0 for `δ` and `1 + k` for `s_k`;
/// `M` uses `k` for `δ_k`, `d` for `p` and `d + 1 + k` for the `k`-th series.
pub fn eval_repr(r: &BasisRepresentation<Complex64>, z: Complex64, noise: Option<EvalNoise<'_>>) -> Result<Complex64> {
    let value = match &r.payload {
        Payload::Hermite { poly } => horner(poly.coeffs(), z, noise, 0)?,
        Payload::Special { cofactor } => {
            let (k0, center) = r.center()?;
            let delta = horner(r.basis.delta(k0).coeffs(), z, noise, 0)?;
            let cof = horner(cofactor.coeffs(), z - center, noise, 1)?;
            repeated_power(delta, r.order + 1) * cof
        }
        Payload::Parallel { columns, weights } => {
            let (k0, center) = r.center()?;
            let delta = horner(r.basis.delta(k0).coeffs(), z, noise, 0)?;
            let t = z - center;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut coeffs = vec![Complex64::new(0.0, 0.0); weights.len()];
            for (k, col) in columns.iter().enumerate() {
                for ((c, &v), &w) in coeffs.iter_mut().zip(col).zip(weights) {
                    *c = v * w;
                }
                sum += horner(&coeffs, t, noise, 1 + k as u64)?;
            }
            repeated_power(delta, r.order + 1) * sum
        }
        Payload::Multicentric { rep } => {
            let basis = rep.basis();
            let d = basis.degree();
            let w = horner(basis.p().coeffs(), z, noise, d as u64)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, row) in rep.components().iter().enumerate() {
                let delta = horner(basis.delta(k).coeffs(), z, noise, k as u64)?;
                let series = horner(row, w, noise, (d + 1 + k) as u64)?;
                acc += delta * series;
            }
            acc
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite)
    }
}
