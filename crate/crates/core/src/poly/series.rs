use crate::error::{Error, Result};
use crate::exactarith::Scalar;

use super::Poly;

/// Power series truncated after `w^order`: always `order + 1` coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Pads with zeros or cuts so that exactly `order + 1` coefficients remain.
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        Self { coeffs }
    }

    pub fn from_poly(q: &Poly<S>, order: usize) -> Self {
        Self::new(q.coeffs().to_vec(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![S::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &S {
        &self.coeffs[j]
    }

    pub fn to_poly(&self) -> Poly<S> {
        Poly::new(self.coeffs.clone())
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Self { coeffs: S::convolve(&self.coeffs, &rhs.coeffs, order + 1) }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `⌊self⁻¹⌋` at the same order via `r_m = −c_0⁻¹ Σ_{i=1}^{m} c_i r_{m−i}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let n = self.order();
        let mut r: Vec<S> = Vec::with_capacity(n + 1);
        r.push(c0_inv.clone());
        for m in 1..=n {
            let acc = (1..=m)
                .filter(|&i| !self.coeffs[i].is_zero())
                .fold(S::zero(), |acc, i| acc + self.coeffs[i].clone() * r[m - i].clone());
            r.push(-(acc * c0_inv.clone()));
        }
        Ok(Self { coeffs: r })
    }
}

/// `⌊q⁻¹⌋_n`, so that `q · result ≡ 1 mod z^{n+1}`.
pub fn series_reciprocal<S: Scalar>(q: &Poly<S>, n: usize) -> Result<TruncatedSeries<S>> {
    TruncatedSeries::from_poly(q, n).reciprocal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::GaussianRational;
    use proptest::prelude::*;

    fn ep(c: &[i64]) -> Poly<GaussianRational> {
        Poly::new(c.iter().map(|&v| GaussianRational::from_ints(v, 0)).collect())
    }

    fn ints(s: &TruncatedSeries<GaussianRational>) -> Vec<GaussianRational> {
        s.coeffs().to_vec()
    }

    #[test]
    fn geometric_series() {
        let r = series_reciprocal(&ep(&[1, -1]), 3).unwrap();
        assert_eq!(ints(&r), ep(&[1, 1, 1, 1]).into_coeffs());
    }

    #[test]
    fn special_cofactors() {
        let d1 = ep(&[1, 0, -1]);
        let r3 = series_reciprocal(&d1.pow(4), 3).unwrap();
        assert_eq!(r3.to_poly(), ep(&[1, 0, 4]));
        let r4 = series_reciprocal(&d1.pow(5), 4).unwrap();
        assert_eq!(r4.to_poly(), ep(&[1, 0, 5, 0, 15]));
    }

    #[test]
    fn zero_constant_term_is_rejected() {
        assert_eq!(series_reciprocal(&ep(&[0, 1]), 3), Err(Error::NotInvertible));
    }

    #[test]
    fn power_matches_polynomial_power() {
        let q = ep(&[2, -1, 3]);
        let s = TruncatedSeries::from_poly(&q, 6).pow(3);
        assert_eq!(s, TruncatedSeries::from_poly(&q.pow(3), 6));
    }

    proptest! {
        #[test]
        fn reciprocal_identity(c in prop::collection::vec(-9i64..9, 1..6), lead in 1i64..5, n in 0usize..12) {
            let mut coeffs = vec![lead];
            coeffs.extend(c);
            let q = ep(&coeffs);
            let r = series_reciprocal(&q, n).unwrap();
            let prod = TruncatedSeries::from_poly(&q, n).mul(&r);
            prop_assert_eq!(prod, TruncatedSeries::one(n));
        }
    }
}
