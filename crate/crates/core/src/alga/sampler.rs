use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::{pow2, AlgAParams};
use crate::exact::rational::{rat_to_f64, round_half_up, Rat};
use crate::lattice::{DualSampler, Lattice, TorusVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    /// Gaussian of density ∝ exp(−2πS²‖u‖²) on H_ℝ.
    #[default]
    Gaussian,
    /// Uniform on the cube of side s in an orthonormal frame of H_ℝ; an
    /// exploratory variant with no success guarantee.
    Uniform,
    /// No noise: y₁ is y₀ rounded to the grid.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierSample {
    /// Point of the grid (1/Q)ℤᵏ.
    pub y1: TorusVec,
    /// Underlying dual point, kept only in debug mode.
    pub true_y0: Option<TorusVec>,
    /// Numerators u of the torus part N·u/Q of y₀, kept only in debug mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_numerators: Option<Vec<BigInt>>,
}

/// Orthonormal basis of the column span of an integer matrix, in f64.
fn orthonormal_frame(basis: &crate::exact::matrix::IntMatrix) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for col in basis.columns() {
        let mut v: Vec<f64> = col.iter().map(|x| rat_to_f64(&Rat::from_integer(x.clone()))).collect();
        // Two Gram–Schmidt passes keep the frame orthogonal to working precision.
        for _ in 0..2 {
            for o in &frame {
                let d: f64 = v.iter().zip(o).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(o) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        frame.push(v.into_iter().map(|x| x / norm).collect());
    }
    frame
}

pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller; 1 − U keeps the logarithm finite.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Exact value of `x·2^bits` with the bits below the f64 mantissa filled by
/// uniform dither, so the result behaves like a sample of a continuous law.
fn scale_with_dither<R: Rng + ?Sized>(x: f64, bits: u64, rng: &mut R) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits_f = x.to_bits();
    let exp = ((bits_f >> 52) & 0x7ff) as i64;
    let frac_bits = bits_f & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac_bits, -1074) } else { (frac_bits | (1u64 << 52), exp - 1075) };
    let mant = BigInt::from(mant) * if x < 0.0 { -1 } else { 1 };
    let shift = e + bits as i64;
    if shift >= 0 {
        let low = rng.gen_bigint_range(&BigInt::zero(), &pow2(shift as u64));
        (mant << shift as usize) + low
    } else {
        mant >> (-shift) as usize
    }
}

/// Classical stand-in for the quantum steps that produce one Fourier sample.
#[derive(Clone, Debug)]
pub struct FourierSampler {
    k: usize,
    q: BigInt,
    s_bits: u64,
    dual: DualSampler,
    frame: Vec<Vec<f64>>,
    mode: NoiseMode,
    debug: bool,
}

impl FourierSampler {
    pub fn new(secret: &Lattice, p: &AlgAParams, mode: NoiseMode, debug: bool) -> FourierSampler {
        Self::with_grid(secret, p.s_bits, p.q_bits, mode, debug)
    }

    /// Sampler with sharpness `2^s_bits` and grid `2^q_bits`.
    pub fn with_grid(secret: &Lattice, s_bits: u64, q_bits: u64, mode: NoiseMode, debug: bool) -> FourierSampler {
        assert!(q_bits >= s_bits, "grid must be at least as fine as the noise scale");
        let q = pow2(q_bits);
        FourierSampler {
            k: secret.k(),
            dual: DualSampler::new(secret, &q),
            q,
            s_bits,
            frame: orthonormal_frame(secret.basis()),
            mode,
            debug,
        }
    }

    /// Noise `u` in units of 1/Q, exact integers.
    fn noise<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<BigInt> {
        let mut w = vec![0f64; self.k];
        let scale = match self.mode {
            NoiseMode::None => return vec![BigInt::zero(); self.k],
            // Standard deviation 1/(2√π S) per orthonormal coordinate.
            NoiseMode::Gaussian => 1.0 / (2.0 * std::f64::consts::PI.sqrt()),
            NoiseMode::Uniform => 1.0,
        };
        for o in &self.frame {
            let g = match self.mode {
                NoiseMode::Gaussian => standard_normal(rng),
                _ => rng.gen::<f64>() - 0.5,
            } * scale;
            for (x, y) in w.iter_mut().zip(o) {
                *x += g * y;
            }
        }
        // u·Q = w·s·Q = w·2^{q−s}.
        let q_bits = self.q.bits() - 1;
        w.into_iter().map(|x| scale_with_dither(x, q_bits - self.s_bits, rng)).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FourierSample {
        let (y0, nums) = self.dual.sample_parts(rng);
        let u = self.noise(rng);
        let qr = Rat::from_integer(self.q.clone());
        let coords = y0
            .coords()
            .iter()
            .zip(&u)
            .map(|(c, n)| Rat::new(round_half_up(&(c * &qr)) + n, self.q.clone()));
        FourierSample {
            y1: TorusVec::new(coords),
            true_y0: self.debug.then_some(y0),
            torus_numerators: self.debug.then_some(nums),
        }
    }
}

/// Draws one Fourier sample for `secret` under parameters `p`.
pub fn sample_fourier_point<R: Rng + ?Sized>(
    secret: &Lattice,
    p: &AlgAParams,
    mode: NoiseMode,
    debug: bool,
    rng: &mut R,
) -> FourierSample {
    FourierSampler::new(secret, p, mode, debug).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alga::params::schedule;
    use crate::exact::rational::rat;
    use crate::lattice::dual_membership;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dither_scaling_is_exact_in_the_high_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = scale_with_dither(0.75, 10, &mut rng);
        assert_eq!(v, BigInt::from(768));
        let v = scale_with_dither(-0.5, 100, &mut rng);
        let hi = -(BigInt::from(1) << 99usize);
        assert!(v >= hi && v < &hi + (BigInt::from(1) << 48usize));
        assert_eq!(scale_with_dither(1.0, 0, &mut rng), BigInt::from(1));
    }

    #[test]
    fn full_lattice_has_zero_dual_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = Lattice::full(2);
        let p = schedule(1, 2).unwrap();
        let s = sample_fourier_point(&l, &p, NoiseMode::Gaussian, true, &mut rng);
        assert!(s.true_y0.unwrap().is_zero());
        // Noise stays within a few standard deviations of 0.
        let lim = Rat::new(BigInt::from(1), p.s()) * rat(10, 1);
        for c in s.y1.lift() {
            assert!(num_traits::Signed::abs(&c) < lim);
        }
    }

    #[test]
    fn trivial_lattice_has_no_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = Lattice::trivial(2);
        let p = schedule(1, 2).unwrap();
        for _ in 0..10 {
            let s = sample_fourier_point(&l, &p, NoiseMode::Gaussian, true, &mut rng);
            assert_eq!(Some(s.y1), s.true_y0);
        }
    }

    #[test]
    fn two_z_halves_split_evenly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = Lattice::from_columns(1, &[vec![2]]);
        let p = schedule(l.answer_bound(), 1).unwrap();
        let sampler = FourierSampler::new(&l, &p, NoiseMode::Gaussian, true);
        let n = 10_000;
        let mut halves = 0;
        for _ in 0..n {
            let s = sampler.sample(&mut rng);
            assert!(dual_membership(&l, s.true_y0.as_ref().unwrap()));
            let two_y = round_half_up(&(&s.y1.coords()[0] * rat(2, 1)));
            if two_y == BigInt::from(1) {
                halves += 1;
            }
        }
        let e = n as f64 / 2.0;
        let chi2 = 2.0 * (halves as f64 - e).powi(2) / e;
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }
}
