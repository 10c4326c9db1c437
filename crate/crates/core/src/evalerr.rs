//! Synthetic error injection for Horner evaluation.
//!
//! An evaluation error of size `ν` is added once to the point of each Horner
//! call, and every step `b + ẑa` is replaced by `(b + (ẑa)(1+μ₁))(1+μ₂)` with
//! fresh complex `μ₁, μ₂`. All draws are uniform on `(−ν, ν)` or `(−μ, μ)` per
//! real and imaginary part, and come from a stream that depends only on the
//! seed and a context label, never on evaluation order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Magnitudes of the two noise channels plus the seed that drives them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel {
    pub nu: f64,
    pub mu: f64,
    pub seed: u64,
}

impl ErrorModel {
    pub fn new(nu: f64, mu: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("nu", nu), ("mu", mu)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(Self { nu, mu, seed })
    }

    pub fn exact(seed: u64) -> Self {
        Self { nu: 0.0, mu: 0.0, seed }
    }

    pub fn is_noiseless(&self) -> bool {
        self.nu == 0.0 && self.mu == 0.0
    }

    /// Independent stream for one constituent polynomial evaluation.
    pub fn stream(&self, context: &[u64]) -> NoiseStream {
        NoiseStream::new(self.seed, context)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic substream keyed by `(seed, context)`.
#[derive(Clone, Debug)]
pub struct NoiseStream {
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, context: &[u64]) -> Self {
        let mut state = seed;
        let mut h = splitmix64(&mut state);
        for &label in context {
            state ^= label.wrapping_add(h);
            h = splitmix64(&mut state);
        }
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self { rng: ChaCha8Rng::from_seed(key) }
    }

    /// Uniform draw on the open interval `(−1, 1)`.
    pub fn unit(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.gen();
            if u != 0.0 {
                return 2.0 * u - 1.0;
            }
        }
    }

    /// Complex draw with both parts uniform on `(−1, 1)`.
    pub fn complex_unit(&mut self) -> Complex64 {
        let re = self.unit();
        let im = self.unit();
        Complex64::new(re, im)
    }
}

/// `z + (a + ib)` with `a, b` uniform on `(−ν, ν)`.
pub fn perturb_point(z: Complex64, model: &ErrorModel, stream: &mut NoiseStream) -> Complex64 {
    let u = stream.complex_unit();
    if model.nu == 0.0 {
        z
    } else {
        z + u * model.nu
    }
}

/// Horner's scheme with the point perturbed once and every step perturbed
/// multiplicatively. With `ν = μ = 0` the result is bit-identical to
/// [`crate::poly::Poly::eval`].
pub fn horner_noisy(
    coeffs: &[Complex64],
    z: Complex64,
    model: &ErrorModel,
    stream: &mut NoiseStream,
) -> Result<Complex64> {
    let zh = perturb_point(z, model, stream);
    let mut it = coeffs.iter().rev();
    let Some(&first) = it.next() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let mut acc = first;
    for &b in it {
        let mut t = acc * zh;
        if model.mu != 0.0 {
            let mu1 = stream.complex_unit() * model.mu;
            let mu2 = stream.complex_unit() * model.mu;
            t *= 1.0 + mu1;
            acc = (t + b) * (1.0 + mu2);
        } else {
            acc = t + b;
        }
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::NonFinite)
    }
}
