//! Multicentric representations applied to linear operators through
//! matrix-vector products only: `Σ_k δ_k(A) ⌊f_k⌋_n(p(A)) b`.

use std::cell::Cell;
use std::io::Read;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evalerr::NoiseStream;
use crate::multicentric::FloatRep;

/// A square linear map given by its action on vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// `y ← A x`; both slices have length `dim()`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in diag.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (row, out) in self.data.chunks_exact(self.n).zip(y.iter_mut()) {
            *out = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// Coordinate-format sparse matrix with 0-based `(row, col, value)` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseMatrix {
    pub fn new(n: usize, entries: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = entries.iter().find(|&&(i, j, _)| i >= n || j >= n) {
            return Err(Error::InvalidArgument(format!("entry ({}, {}) outside a {n}×{n} matrix", i + 1, j + 1)));
        }
        Ok(Self { n, entries })
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for &(i, j, a) in &self.entries {
            y[i] += a * x[j];
        }
    }
}

/// Operator defined by a caller-supplied matvec.
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[Complex64], &mut [Complex64])> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[Complex64], &mut [Complex64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        (self.f)(x, y)
    }
}

/// Counts matvecs issued through it.
struct Counted<'a> {
    inner: &'a dyn LinearOperator,
    calls: Cell<usize>,
}

impl Counted<'_> {
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.calls.set(self.calls.get() + 1);
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        self.inner.apply(x, &mut y);
        y
    }

    /// `q(A) x` by Horner: `v ← A v + c_i x`.
    fn poly_apply(&self, coeffs: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
        let Some((&lead, rest)) = coeffs.split_last() else {
            return vec![Complex64::new(0.0, 0.0); x.len()];
        };
        let mut v: Vec<Complex64> = x.iter().map(|&xi| lead * xi).collect();
        for &c in rest.iter().rev() {
            v = self.apply(&v);
            for (vi, &xi) in v.iter_mut().zip(x) {
                *vi += c * xi;
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub output: Vec<Complex64>,
    /// Matvecs with `A` spent on `output`: `n·deg p + d(d−1)`.
    pub matvecs: usize,
    pub order: usize,
    /// `‖P(Pb) − Pb‖ / ‖b‖`.
    pub idempotency_residual: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// `v = Σ_k δ_k(A) y_k` with `y_k = Σ_j α_{k,j} B^j b`, `B = p(A)`. The Krylov
/// vectors `B^j b` are shared by all `d` series.
fn project(rep: &FloatRep, op: &Counted<'_>, b: &[Complex64]) -> Vec<Complex64> {
    let basis = rep.basis();
    let d = basis.degree();
    let n = rep.order();
    let mut y = vec![vec![Complex64::new(0.0, 0.0); b.len()]; d];
    let mut u = b.to_vec();
    for j in 0..=n {
        for (yk, row) in y.iter_mut().zip(rep.components()) {
            let a = row[j];
            for (yi, &ui) in yk.iter_mut().zip(&u) {
                *yi += a * ui;
            }
        }
        if j < n {
            u = op.poly_apply(basis.p().coeffs(), &u);
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); b.len()];
    for (k, yk) in y.iter().enumerate() {
        for (vi, wi) in v.iter_mut().zip(op.poly_apply(basis.delta(k).coeffs(), yk)) {
            *vi += wi;
        }
    }
    v
}

pub fn apply_indicator(rep: &FloatRep, a: &dyn LinearOperator, b: &[Complex64]) -> Result<ProjectionResult> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.len() });
    }
    let op = Counted { inner: a, calls: Cell::new(0) };
    let output = project(rep, &op, b);
    let matvecs = op.calls.get();
    let again = project(rep, &op, &output);
    let diff: Vec<Complex64> = again.iter().zip(&output).map(|(x, y)| x - y).collect();
    let bn = norm(b);
    let idempotency_residual = if bn == 0.0 { 0.0 } else { norm(&diff) / bn };
    Ok(ProjectionResult { output, matvecs, order: rep.order(), idempotency_residual })
}

/// Largest `‖P(Pb) − Pb‖ / ‖b‖` over seeded random probes `b`.
pub fn idempotency_residual(rep: &FloatRep, a: &dyn LinearOperator, probes: usize, seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..probes as u64 {
        let mut s = NoiseStream::new(seed, &[i]);
        let b: Vec<Complex64> = (0..a.dim()).map(|_| s.complex_unit()).collect();
        worst = worst.max(apply_indicator(rep, a, &b)?.idempotency_residual);
    }
    Ok(worst)
}

fn parse_complex(field: &str) -> Result<Complex64> {
    let t = field.trim();
    t.parse::<Complex64>()
        .map_err(|_| Error::Parse { what: "complex number", input: t.to_string() })
}

/// Coordinate text: lines `row col re [im]` with 1-based indices; an optional
/// `dim N` line fixes the size, otherwise it is the largest index. Lines
/// starting with `#` or `%` are comments.
pub fn parse_coordinate(text: &str) -> Result<SparseMatrix> {
    let mut dim = None;
    let mut entries = Vec::new();
    let mut largest = 0usize;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse { what: "coordinate entry", input: line.to_string() };
        if fields[0] == "dim" {
            dim = Some(fields.get(1).and_then(|v| v.parse::<usize>().ok()).ok_or_else(bad)?);
            continue;
        }
        if !(3..=4).contains(&fields.len()) {
            return Err(bad());
        }
        let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(bad);
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let im = fields.get(3).map_or(Ok(0.0), |s| num(s))?;
        largest = largest.max(i).max(j);
        entries.push((i - 1, j - 1, Complex64::new(num(fields[2])?, im)));
    }
    SparseMatrix::new(dim.unwrap_or(largest), entries)
}

/// Dense CSV, one matrix row per record, entries like `1.5-2i`.
pub fn read_dense_csv<R: Read>(input: R) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let rows = reader
        .records()
        .map(|rec| rec?.iter().map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    DenseMatrix::from_rows(rows)
}

/// Vector as CSV: every field of every record, in order.
pub fn read_vector_csv<R: Read>(input: R) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = Vec::new();
    for rec in reader.records() {
        for field in rec?.iter().filter(|f| !f.is_empty()) {
            out.push(parse_complex(field)?);
        }
    }
    Ok(out)
}

pub fn vector_to_csv(v: &[Complex64]) -> String {
    v.iter().map(|z| format!("{:e},{:e}\n", z.re, z.im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coordinate_parsing() {
        let m = parse_coordinate("% comment\n1 1 2.0\n2 3 -1 0.5\ndim 3\n").unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.entries(), &[(0, 0, c(2.0, 0.0)), (1, 2, c(-1.0, 0.5))]);
        assert!(parse_coordinate("0 1 1.0").is_err());
        assert!(parse_coordinate("1 x 1.0").is_err());
        assert!(parse_coordinate("dim 1\n2 2 1.0").is_err());
    }

    #[test]
    fn dense_and_vector_csv() {
        let m = read_dense_csv("1, 2i\n-1+0.5i, 3\n".as_bytes()).unwrap();
        assert_eq!(m.get(0, 1), c(0.0, 2.0));
        assert_eq!(m.get(1, 0), c(-1.0, 0.5));
        assert!(read_dense_csv("1,2\n3\n".as_bytes()).is_err());
        let v = read_vector_csv("1\n2-1i\n\n3".as_bytes()).unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(2.0, -1.0), c(3.0, 0.0)]);
    }

    #[test]
    fn operator_kinds_agree() {
        let dense = DenseMatrix::from_rows(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 1.0), c(-1.0, 0.0)]]).unwrap();
        let sparse = SparseMatrix::new(2, vec![(0, 0, c(1.0, 0.0)), (0, 1, c(2.0, 0.0)), (1, 0, c(0.0, 1.0)), (1, 1, c(-1.0, 0.0))]).unwrap();
        let closure = FnOperator::new(2, |x: &[Complex64], y: &mut [Complex64]| dense.apply(x, y));
        let x = [c(0.5, -1.0), c(2.0, 0.25)];
        let mut y = [[c(0.0, 0.0); 2]; 3];
        dense.apply(&x, &mut y[0]);
        sparse.apply(&x, &mut y[1]);
        closure.apply(&x, &mut y[2]);
        assert_eq!(y[0], y[1]);
        assert_eq!(y[0], y[2]);
    }
}
