use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alga::NoiseMode;
use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;
use crate::lattice::Lattice;
use crate::oracle::descriptor::LatticeSpec;
use crate::sieve::{SieveBudgets, SieveNoise};

/// Planted secret: a fixed lattice, or a fresh random one per trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SecretSpec {
    Fixed { generators: Vec<Vec<i64>> },
    /// Uniform integer entries in [−max_entry, max_entry], redrawn until the rank is `rank`.
    Random { rank: usize, max_entry: i64 },
}

impl SecretSpec {
    pub fn draw<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Lattice> {
        match self {
            SecretSpec::Fixed { generators } => LatticeSpec { k, generators: generators.clone() }.to_lattice(),
            SecretSpec::Random { rank, max_entry } => random_lattice(k, *rank, *max_entry, rng),
        }
    }
}

pub fn random_lattice<R: Rng + ?Sized>(k: usize, rank: usize, max_entry: i64, rng: &mut R) -> Result<Lattice> {
    if rank > k {
        return Err(Error::InvalidArgument(format!("rank {rank} exceeds dimension {k}")));
    }
    if rank > 0 && max_entry < 1 {
        return Err(Error::InvalidArgument("max_entry must be positive".into()));
    }
    loop {
        let m = IntMatrix::from_fn(k, rank, |_, _| BigInt::from(rng.gen_range(-max_entry..=max_entry)));
        if m.to_rat().rank() == rank {
            return Ok(Lattice::from_generators(&m));
        }
    }
}

/// Overrides of the Algorithm A schedule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleOverrides {
    /// Answer bound n; defaults to the least n with Δ < 2^{2n}.
    pub n: Option<u64>,
    pub c: Option<u64>,
    pub retries: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HspDescriptor {
    pub k: usize,
    pub secret: SecretSpec,
    #[serde(default)]
    pub schedule: ScheduleOverrides,
    #[serde(default)]
    pub noise: NoiseMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: u64,
}

/// Planted shift: fixed, or uniform in the box ‖s‖∞ ≤ 2^{t−1} per trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftSpec {
    Fixed { shift: Vec<i64> },
    Random,
}

impl ShiftSpec {
    pub fn draw<R: Rng + ?Sized>(&self, k: usize, t: u64, rng: &mut R) -> Result<Vec<BigInt>> {
        match self {
            ShiftSpec::Fixed { shift } if shift.len() == k => Ok(shift.iter().map(|&x| BigInt::from(x)).collect()),
            ShiftSpec::Fixed { shift } => Err(Error::Dimension(format!("shift has {} coordinates, expected {k}", shift.len()))),
            ShiftSpec::Random => {
                let b = 1i64 << (t - 1);
                Ok((0..k).map(|_| BigInt::from(rng.gen_range(-b..=b))).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDescriptor {
    pub k: usize,
    pub t: u64,
    pub lattice: Vec<Vec<i64>>,
    pub shift: ShiftSpec,
    /// Overrides the derived stage exponent.
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub noise: SieveNoise,
    #[serde(default)]
    pub budgets: Option<SieveBudgets>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: u64,
}

impl ShiftDescriptor {
    pub fn lattice(&self) -> Result<Lattice> {
        LatticeSpec { k: self.k, generators: self.lattice.clone() }.to_lattice()
    }
}

fn one() -> u64 {
    1
}
