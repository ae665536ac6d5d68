use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use super::target::torsion_exponent;

/// Largest common denominator (in bits) the i128 phase arithmetic accepts.
pub const MAX_DEN_BITS: u64 = 120;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SieveNoise {
    /// Multipliers drawn exactly uniformly from H^# on the grid.
    #[default]
    Exact,
    /// Labels carry rasterized Gaussian noise of width 1/G around the true multiplier.
    Gaussian,
}

/// Per-run retry limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveBudgets {
    /// Restarts allowed at one recursion node (steps 3(c), 4(c), 4(e)).
    pub node_retries: u32,
    /// Post-selection attempts per cyclic factor.
    pub postselect_retries: u32,
    /// Hard cap on phase qubits created in a single run.
    pub max_qubits: u64,
}

impl Default for SieveBudgets {
    fn default() -> Self {
        SieveBudgets { node_retries: 64, postselect_retries: 64, max_qubits: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub k: usize,
    /// ‖s‖∞ ≤ 2^{t−1}.
    pub t: u64,
    /// n = k·t.
    pub n: u64,
    /// Torsion exponent of the target group's torus part (≥ t).
    pub torsion_t: u64,
    /// Bit size of the basis of H.
    pub h: u64,
    pub m: u64,
    /// G = 2^{g_bits}: Gaussian width of the qubit sampler.
    pub g_bits: u64,
    /// Q = 2^{q_bits} ≥ G².
    pub q_bits: u64,
    /// Gram determinant Δ of H; every multiplier lives on (1/(Δ·Q))ℤᵏ.
    pub delta: BigInt,
    pub noise: SieveNoise,
    pub budgets: SieveBudgets,
}

/// Least m ≥ 2 with 2^{k·m²} > k·(n + 2h)·2^t.
pub fn stage_exponent(k: usize, t: u64, h: u64) -> u64 {
    stage_exponent_for(k, t, k as u64 * t, h)
}

/// As [`stage_exponent`], with the qubit count n + 2h taken from a target
/// group whose torsion part may be larger than 2^t.
pub fn stage_exponent_for(k: usize, t: u64, n: u64, h: u64) -> u64 {
    let rhs = BigInt::from(k as u64 * (n + 2 * h)) << t as usize;
    (2u64..).find(|m| (BigInt::from(1) << (k as u64 * m * m) as usize) > rhs).expect("unbounded search")
}

pub fn sieve_config(l: &Lattice, t: u64) -> Result<SieveConfig> {
    SieveConfig::build(l, t, None)
}

impl SieveConfig {
    /// `m_override` replaces the derived stage exponent (used by scaling probes).
    pub fn build(l: &Lattice, t: u64, m_override: Option<u64>) -> Result<SieveConfig> {
        if t == 0 {
            return Err(Error::InvalidArgument("t must be at least 1".into()));
        }
        let k = l.k();
        let h = l.bit_complexity();
        let torsion_t = torsion_exponent(l, t);
        let m = match m_override {
            Some(m) if m < 1 => return Err(Error::InvalidArgument("m must be positive".into())),
            Some(m) => m,
            None => stage_exponent_for(k, t, k as u64 * torsion_t, h),
        };
        // The final window radius 2^{−km²−1} must sit on the grid with room to spare.
        let g_bits = k as u64 * m * m + 3;
        let cfg = SieveConfig {
            k,
            t,
            n: k as u64 * t,
            torsion_t,
            h,
            m,
            g_bits,
            q_bits: 2 * g_bits,
            delta: l.gram_det().clone(),
            noise: SieveNoise::Exact,
            budgets: SieveBudgets::default(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_noise(mut self, noise: SieveNoise) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_budgets(mut self, budgets: SieveBudgets) -> Self {
        self.budgets = budgets;
        self
    }

    pub fn check(&self) -> Result<()> {
        let bits = self.den_big().bits();
        if bits > MAX_DEN_BITS {
            return Err(Error::ParameterCeiling(format!("phase denominator needs {bits} bits (limit {MAX_DEN_BITS})")));
        }
        if 2 * self.km() + 1 > 24 {
            return Err(Error::ParameterCeiling(format!("k·m = {} gives base vectors beyond 2^24 terms", self.km())));
        }
        if self.q_bits < 2 * self.g_bits {
            return Err(Error::InvalidArgument("Q must be at least G²".into()));
        }
        Ok(())
    }

    pub fn km(&self) -> u64 {
        self.k as u64 * self.m
    }

    /// 4^{km}: the least admissible spot length.
    pub fn min_len(&self) -> u64 {
        1u64 << (2 * self.km())
    }

    /// 4^{km+1}: the first inadmissible spot length.
    pub fn max_len(&self) -> u64 {
        self.min_len() * 4
    }

    fn den_big(&self) -> BigInt {
        &self.delta << self.q_bits as usize
    }

    /// Common denominator Δ·Q of every multiplier.
    pub fn den(&self) -> i128 {
        self.den_big().to_i128().expect("checked against the ceiling")
    }

    /// Window radius 2^{−jm−1} at stage j, in units of 1/den.
    pub fn radius(&self, j: u64) -> i128 {
        self.den() >> (j * self.m + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_exponent_examples() {
        assert_eq!(stage_exponent(1, 4, 4), 3);
        assert_eq!(stage_exponent(2, 1, 1), 2);
        // k(n+2h)2^t = 40 for 8ℤ with t = 2.
        assert_eq!(stage_exponent(1, 2, 4), 3);
        assert_eq!(stage_exponent(2, 2, 6), 2);
    }

    #[test]
    fn final_radius_meets_accuracy_target() {
        for (l, t) in [
            (Lattice::from_columns(1, &[vec![8]]), 2),
            (Lattice::from_columns(2, &[vec![4, 0], vec![0, 4]]), 2),
            (Lattice::trivial(1), 3),
            (Lattice::from_columns(2, &[vec![3, 1]]), 2),
        ] {
            let c = sieve_config(&l, t).unwrap();
            let r_inv = BigInt::from(1) << (c.km() * c.m + 1) as usize;
            assert!(r_inv >= BigInt::from(c.k as u64 * (c.n + 2 * c.h)) << (c.t + 1) as usize);
            assert!(c.m >= 2 && c.q_bits >= 2 * c.g_bits);
            assert_eq!(c.radius(c.km()) << (c.km() * c.m + 1), c.den());
        }
    }

    #[test]
    fn ceiling_and_bad_t() {
        assert!(sieve_config(&Lattice::trivial(1), 0).is_err());
        assert!(matches!(sieve_config(&Lattice::trivial(3), 40), Err(Error::ParameterCeiling(_))));
    }
}
