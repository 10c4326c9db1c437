//! Dense univariate polynomials over a [`Scalar`], truncated power series, the
//! Lagrange basis at the roots of `p`, and numeric root utilities.

mod exact_eval;
mod lagrange;
mod roots;
mod series;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactarith::{GaussianRational, Scalar};

pub use exact_eval::BinaryPointEvaluator;
pub use lagrange::LagrangeBasis;
pub use roots::{critical_levels, critical_points, critical_radius, first_merge_level, roots_numeric};
pub use series::{series_reciprocal, TruncatedSeries};

/// Polynomial with coefficient `j` multiplying `z^j`. The zero polynomial has
/// no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

pub type ExactPoly = Poly<GaussianRational>;
pub type FloatPoly = Poly<Complex64>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    /// `lead · Π (z − r)`.
    pub fn from_roots(roots: &[S], lead: S) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), S::one()])
        })
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> S {
        self.coeffs.get(j).cloned().unwrap_or_else(S::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Horner's scheme `c_0 + z(c_1 + z(…))`.
    pub fn eval(&self, z: &S) -> S {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return S::zero();
        };
        it.fold(first.clone(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.clone() * S::from_integer(j as i64))
                .collect(),
        )
    }

    /// `self(inner(z))`, by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return Self::zero();
        };
        it.fold(Self::constant(first.clone()), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    /// Taylor shift: the polynomial `t ↦ self(center + t)`.
    pub fn shift(&self, center: &S) -> Self {
        self.compose(&Self::new(vec![center.clone(), S::one()]))
    }

    /// Euclidean division, `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead_inv = divisor.leading().and_then(Scalar::inv).ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![S::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl ExactPoly {
    /// Coefficient-wise rounding to binary64.
    pub fn to_float(&self) -> Result<FloatPoly> {
        Ok(Poly::new(
            self.coeffs.iter().map(GaussianRational::to_float).collect::<Result<_>>()?,
        ))
    }
}

impl<'a, S: Scalar> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::new(S::convolve(&self.coeffs, &rhs.coeffs, self.coeffs.len() + rhs.coeffs.len() - 1))
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for ExactPoly {
    /// Comma-separated ascending coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ExactPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(str::parse::<GaussianRational>)
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ep(c: &[i64]) -> ExactPoly {
        Poly::new(c.iter().map(|&v| GaussianRational::from_ints(v, 0)).collect())
    }

    fn gq(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_fracs(n, d, 0, 1)
    }

    #[test]
    fn horner_examples() {
        let q = ep(&[1, 0, -2, 0, 1]);
        assert_eq!(q.eval(&gq(0, 1)), gq(1, 1));
        assert_eq!(q.eval(&gq(1, 1)), gq(0, 1));
        assert_eq!(q.eval(&gq(-1, 1)), gq(0, 1));
        let r = ep(&[0, 1, 0, -1]);
        assert_eq!(r.eval(&gq(1, 2)), gq(3, 8));
    }

    #[test]
    fn arithmetic_examples() {
        let d1 = ep(&[1, 0, -1]);
        assert_eq!(d1.pow(2), ep(&[1, 0, -2, 0, 1]));
        assert_eq!(ep(&[0, 1, 0, -1]).derivative(), ep(&[1, 0, -3]));
        let s3 = &d1.pow(4) * &ep(&[1, 0, 4]);
        assert_eq!(s3.degree(), Some(10));
        assert_eq!(s3.eval(&gq(0, 1)), gq(1, 1));
        assert!(ep(&[0, 0, 0]).is_zero());
        assert_eq!(ep(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn compose_and_shift() {
        // (1 − z²)∘(z + 1) = −2z − z²
        let d1 = ep(&[1, 0, -1]);
        assert_eq!(d1.compose(&ep(&[1, 1])), ep(&[0, -2, -1]));
        assert_eq!(d1.shift(&gq(1, 1)), ep(&[0, -2, -1]));
    }

    #[test]
    fn division() {
        let a = ep(&[1, 0, -2, 0, 1]);
        let b = ep(&[1, 0, -1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
        assert_eq!(a.div_rem(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_format() {
        let p: ExactPoly = "0, 1, 0, -1".parse().unwrap();
        assert_eq!(p, ep(&[0, 1, 0, -1]));
        assert_eq!(p.to_string(), "0, 1, 0, -1");
        let q: ExactPoly = "5, 4, 1/2+1/3*i".parse().unwrap();
        assert_eq!(q.to_string(), "5, 4, 1/2+1/3*i");
    }

    fn arb_poly() -> impl Strategy<Value = ExactPoly> {
        prop::collection::vec((-20i64..20, -20i64..20, 1i64..6), 0..8).prop_map(|v| {
            Poly::new(v.into_iter().map(|(a, b, d)| GaussianRational::from_fracs(a, d, b, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(q in arb_poly(), a in -9i64..9, b in -9i64..9, d in 1i64..5) {
            let z = GaussianRational::from_fracs(a, d, b, d);
            let direct = q.coeffs().iter().enumerate().fold(
                <GaussianRational as Scalar>::zero(),
                |acc, (j, c)| acc + c.clone() * Scalar::pow(&z, j),
            );
            prop_assert_eq!(q.eval(&z), direct);
        }

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|dr| dr < b.degree().unwrap()));
        }
    }
}
