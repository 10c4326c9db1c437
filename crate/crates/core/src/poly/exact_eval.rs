use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::exactarith::{rational_to_f64, BigRational};

use super::ExactPoly;

/// Exact evaluation of a fixed Gaussian-rational polynomial at binary64
/// points, followed by one correctly rounded conversion per part.
///
/// Coefficients are brought to a common denominator `D` once; a point
/// `z = (X + iY)/2^s` is then handled by homogeneous integer Horner, so the
/// numerator is `Σ N_j (X+iY)^j 2^{s(deg−j)}` over `D·2^{s·deg}`.
#[derive(Clone, Debug)]
pub struct BinaryPointEvaluator {
    numer: Vec<(BigInt, BigInt)>,
    denom: BigInt,
}

/// `(m, e)` with `v = m · 2^e`, `m` an integer.
fn decode(v: f64) -> (BigInt, i32) {
    let (mant, exp, sign) = Float::integer_decode(v);
    (BigInt::from(mant) * sign, exp as i32)
}

impl BinaryPointEvaluator {
    pub fn new(q: &ExactPoly) -> Self {
        let denom = q
            .coeffs()
            .iter()
            .flat_map(|c| [c.re.denom().clone(), c.im.denom().clone()])
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let scale = |r: &BigRational| r.numer() * (&denom / r.denom());
        let numer = q.coeffs().iter().map(|c| (scale(&c.re), scale(&c.im))).collect();
        Self { numer, denom }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let Some(((lead_re, lead_im), rest)) = self.numer.split_last() else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let (mx, ex) = decode(z.re);
        let (my, ey) = decode(z.im);
        let s = (-ex.min(ey)).max(0) as usize;
        let x = mx << (ex + s as i32) as usize;
        let y = my << (ey + s as i32) as usize;
        let deg = rest.len();
        let (mut ar, mut ai) = (lead_re.clone(), lead_im.clone());
        for (i, (nr, ni)) in rest.iter().enumerate().rev() {
            let shift = s * (deg - i);
            let re = &ar * &x - &ai * &y;
            let im = &ar * &y + &ai * &x;
            ar = re + (nr << shift);
            ai = im + (ni << shift);
        }
        let den = &self.denom << (s * deg);
        let part = |num: BigInt| {
            if num.is_zero() {
                Ok(0.0)
            } else {
                rational_to_f64(&BigRational::new(num, den.clone()))
            }
        };
        Ok(Complex64::new(part(ar)?, part(ai)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::GaussianRational;
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn gq(rn: i64, rd: i64, in_: i64, id: i64) -> GaussianRational {
        GaussianRational::from_fracs(rn, rd, in_, id)
    }

    #[test]
    fn matches_rational_horner() {
        let q = Poly::new(vec![gq(1, 3, -2, 7), gq(5, 2, 0, 1), gq(-11, 13, 1, 9), gq(3, 1, 4, 5)]);
        let ev = BinaryPointEvaluator::new(&q);
        for z in [Complex64::new(0.1, -0.7), Complex64::new(-3.25, 1e-9), Complex64::new(0.0, 0.0), Complex64::new(1e5, 2.0)] {
            let want = q.eval(&GaussianRational::from_complex(z).unwrap()).to_float().unwrap();
            assert_eq!(ev.eval(z).unwrap(), want);
        }
    }

    #[test]
    fn empty_polynomial_is_zero() {
        let ev = BinaryPointEvaluator::new(&Poly::zero());
        assert_eq!(ev.eval(Complex64::new(1.0, 1.0)).unwrap(), Complex64::new(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn agrees_with_rational_evaluation(
            coeffs in prop::collection::vec((-50i64..50, 1i64..20, -50i64..50, 1i64..20), 1..8),
            re in -4.0f64..4.0, im in -4.0f64..4.0,
        ) {
            let q = Poly::new(coeffs.iter().map(|&(a, b, c, d)| gq(a, b, c, d)).collect());
            let z = Complex64::new(re, im);
            let want = q.eval(&GaussianRational::from_complex(z).unwrap()).to_float().unwrap();
            prop_assert_eq!(BinaryPointEvaluator::new(&q).eval(z).unwrap(), want);
        }
    }
}
