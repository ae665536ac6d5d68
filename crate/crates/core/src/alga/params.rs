use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the bit length of the largest parameter (Q).
pub const DEFAULT_BIT_CEILING: u64 = 1 << 20;

/// Algorithm A parameters. Every quantity is a power of two and is stored by
/// its exponent: `R = 2^r_bits` and so on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgAParams {
    pub n: u64,
    pub k: usize,
    /// Exponent constant in Λ = R₁^{C·k}.
    pub c: u64,
    pub r_bits: u64,
    pub r1_bits: u64,
    pub lambda_bits: u64,
    pub t_bits: u64,
    pub s_bits: u64,
    pub q_bits: u64,
    pub retries: u32,
}

pub fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits as usize
}

/// Smallest e with 2^e ≥ x, for x ≥ 1.
pub fn ceil_log2(x: u64) -> u64 {
    64 - (x.max(1) - 1).leading_zeros() as u64
}

/// Schedule knobs exposed to experiment descriptors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleOptions {
    pub c: u64,
    pub retries: u32,
    pub bit_ceiling: u64,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        ScheduleOptions { c: 1, retries: 8, bit_ceiling: DEFAULT_BIT_CEILING }
    }
}

/// Smallest power-of-two parameters meeting every constraint for answer
/// bound `n` in dimension `k`.
pub fn schedule(n: u64, k: usize) -> Result<AlgAParams> {
    schedule_with(n, k, &ScheduleOptions::default())
}

pub fn schedule_with(n: u64, k: usize, opts: &ScheduleOptions) -> Result<AlgAParams> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("schedule needs n ≥ 1 and k ≥ 1".into()));
    }
    if opts.c == 0 {
        return Err(Error::InvalidArgument("schedule constant must be positive".into()));
    }
    let r_bits = (2 * n + 1).max(ceil_log2(k as u64 + 1));
    let r1_bits = r_bits + k as u64 + 1;
    let lambda_bits = opts.c * k as u64 * r1_bits;
    finish(n, k, opts, r_bits, r1_bits, lambda_bits)
}

fn finish(n: u64, k: usize, opts: &ScheduleOptions, r_bits: u64, r1_bits: u64, lambda_bits: u64) -> Result<AlgAParams> {
    let t_bits = lambda_bits + r1_bits;
    // S ≥ Λ√k ⇔ 4^{s−λ} ≥ k.
    let sqrt_k_bits = (ceil_log2(k as u64) + 1) / 2;
    let s_bits = (2 + 2 * r_bits + 3 * t_bits).max(lambda_bits + sqrt_k_bits);
    let q_bits = 2 * s_bits;
    if q_bits > opts.bit_ceiling {
        return Err(Error::ParameterCeiling(format!(
            "Q needs {q_bits} bits, ceiling is {}",
            opts.bit_ceiling
        )));
    }
    Ok(AlgAParams { n, k, c: opts.c, r_bits, r1_bits, lambda_bits, t_bits, s_bits, q_bits, retries: opts.retries })
}

impl AlgAParams {
    pub fn r(&self) -> BigInt {
        pow2(self.r_bits)
    }
    pub fn r1(&self) -> BigInt {
        pow2(self.r1_bits)
    }
    pub fn lambda(&self) -> BigInt {
        pow2(self.lambda_bits)
    }
    pub fn t(&self) -> BigInt {
        pow2(self.t_bits)
    }
    pub fn s(&self) -> BigInt {
        pow2(self.s_bits)
    }
    pub fn q(&self) -> BigInt {
        pow2(self.q_bits)
    }

    /// Parameters for retry number `attempt`: T (and the multiplier range it
    /// admits) grows by `2^attempt`, S and Q are recomputed to keep every
    /// constraint.
    pub fn escalated(&self, attempt: u32) -> Result<AlgAParams> {
        let opts = ScheduleOptions { c: self.c, retries: self.retries, bit_ceiling: u64::MAX };
        finish(self.n, self.k, &opts, self.r_bits, self.r1_bits, self.lambda_bits + attempt as u64)
    }

    /// Checks the full constraint list exactly.
    pub fn check(&self) -> Result<()> {
        let (r, r1, lam, t, s, q) = (self.r(), self.r1(), self.lambda(), self.t(), self.s(), self.q());
        let k = BigInt::from(self.k);
        let fail = |what: &str| Err(Error::InvalidArgument(format!("schedule violates {what}")));
        if r < pow2(2 * self.n + 1) {
            return fail("R ≥ 2^{2n+1}");
        }
        if r < &k + 1 {
            return fail("R ≥ k+1");
        }
        if r1 < pow2(self.k as u64 + 1) * &r {
            return fail("R₁ ≥ 2^{k+1}R");
        }
        if lam < num_traits::pow(r1.clone(), (self.c as usize) * self.k) {
            return fail("Λ ≥ R₁^{Ck}");
        }
        if t < &lam * &r1 {
            return fail("T ≥ ΛR₁");
        }
        if s < BigInt::from(4) * &r * &r * &t * &t * &t {
            return fail("S ≥ 4R²T³");
        }
        if &s * &s < &lam * &lam * &k {
            return fail("S ≥ Λ√k");
        }
        if q < &s * &s {
            return fail("Q ≥ S²");
        }
        Ok(())
    }
}
