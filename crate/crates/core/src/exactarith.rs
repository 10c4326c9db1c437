//! Exact rational and Gaussian-rational scalars, and the [`Scalar`] trait that
//! lets the polynomial machinery run over either exact or binary64 complex
//! numbers.
//!
//! Textual format for Gaussian rationals is `a/b+c/d*i`; integers may drop the
//! denominator (`2` is `2/1`) and either part may be omitted when zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Field operations shared by the exact and the floating scalar kinds.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_integer(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// Lossy for the floating kind; non-finite parts signal overflow.
    fn from_gaussian(g: &GaussianRational) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// `true` for scalars carrying exact values.
    fn is_exact() -> bool;

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        rhs.inv()
            .map(|r| self.clone() * r)
            .ok_or(Error::DivisionByZero)
    }

    /// First `len` coefficients of the product of two coefficient lists.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }

    fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_fracs(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// Exact value of a binary64 complex number. Fails on non-finite parts.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        let part = |x: f64| {
            BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {x}")))
        };
        Ok(Self::new(part(z.re)?, part(z.im)?))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |a|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Division through multiplication by the conjugate over |b|².
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let den = rhs.norm_sqr();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self * &rhs.conj();
        Ok(Self::new(num.re / &den, num.im / den))
    }

    /// Each part rounded to the nearest binary64 (ties to even).
    pub fn to_float(&self) -> Result<Complex64> {
        Ok(Complex64::new(rational_to_f64(&self.re)?, rational_to_f64(&self.im)?))
    }
}

/// Correctly rounded conversion of a rational to binary64.
pub fn rational_to_f64(r: &BigRational) -> Result<f64> {
    match r.to_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Overflow(r.to_string())),
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl GaussianRational {
    fn default_zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        Self::default_zero()
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_integer(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::real(r.clone())
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
    fn inv(&self) -> Option<Self> {
        Self::one().checked_div(self).ok()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn is_exact() -> bool {
        true
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        GaussianRational::checked_div(self, rhs)
    }

    /// Integer convolution over a common denominator per operand; each output
    /// coefficient is reduced once.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let (an, ad) = scaled_numerators(a);
        let (bn, bd) = scaled_numerators(b);
        let den = ad * bd;
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let mut re = BigInt::zero();
            let mut im = BigInt::zero();
            for i in k.saturating_sub(bn.len().saturating_sub(1))..=k.min(an.len().saturating_sub(1)) {
                let (Some((xr, xi)), Some((yr, yi))) = (an.get(i), bn.get(k - i)) else {
                    continue;
                };
                if xr.is_zero() && xi.is_zero() {
                    continue;
                }
                re += xr * yr;
                if !xi.is_zero() || !yi.is_zero() {
                    re -= xi * yi;
                    im += xr * yi + xi * yr;
                }
            }
            out.push(Self::new(BigRational::new(re, den.clone()), BigRational::new(im, den.clone())));
        }
        out
    }
}

/// Gaussian-integer numerators over the least common denominator.
fn scaled_numerators(v: &[GaussianRational]) -> (Vec<(BigInt, BigInt)>, BigInt) {
    use num_integer::Integer;
    let den = v.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.re.denom()).lcm(g.im.denom()));
    let nums = v
        .iter()
        .map(|g| {
            let scale = |r: &BigRational| r.numer() * (&den / r.denom());
            (scale(&g.re), scale(&g.im))
        })
        .collect();
    (nums, den)
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_integer(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.to_complex()
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        fmt_rational(&self.im, f)?;
        write!(f, "*i")
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = || Error::Parse { what: "gaussian rational", input: input.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix("*i") else {
            return parse_rational(&s).map(Self::real).ok_or_else(err);
        };
        // The separator between parts is the last sign that is not leading.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (parse_rational(&body[..i]).ok_or_else(err)?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let im = parse_rational(im).ok_or_else(err)?;
        Ok(Self::new(re, im))
    }
}
