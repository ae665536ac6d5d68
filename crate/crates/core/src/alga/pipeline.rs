use rand::Rng;
use serde::{Deserialize, Serialize};

use super::finite::{finite_stage, FiniteStageOptions};
use super::params::AlgAParams;
use super::recovery::{recover_colattice, RecoveryTrace};
use super::sampler::{FourierSampler, NoiseMode};
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndToEndOptions {
    pub noise: NoiseMode,
    /// Keep the true dual point and the last recovery trace.
    pub debug: bool,
    pub finite: FiniteStageOptions,
}

impl Default for EndToEndOptions {
    fn default() -> Self {
        EndToEndOptions { noise: NoiseMode::Gaussian, debug: false, finite: FiniteStageOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndToEndOutcome {
    pub result: Option<crate::lattice::Lattice>,
    /// Fourier samples drawn (one per attempt).
    pub samples: u32,
    /// Dual samples consumed by the finite stage.
    pub finite_draws: u64,
    pub last_trace: Option<RecoveryTrace>,
    pub failures: Vec<String>,
}

/// Sample, recover H₁, then run the finite stage; each failed attempt
/// escalates the schedule and resamples, up to `p.retries` attempts.
pub fn end_to_end<R: Rng + ?Sized>(
    secret: &Lattice,
    p: &AlgAParams,
    opts: &EndToEndOptions,
    rng: &mut R,
) -> EndToEndOutcome {
    let mut out = EndToEndOutcome { result: None, samples: 0, finite_draws: 0, last_trace: None, failures: Vec::new() };
    for attempt in 0..p.retries.max(1) {
        let params = match p.escalated(attempt) {
            Ok(q) => q,
            Err(e) => {
                out.failures.push(e.to_string());
                break;
            }
        };
        let sample = FourierSampler::new(secret, &params, opts.noise, opts.debug).sample(rng);
        out.samples += 1;
        let (h1, trace) = recover_colattice(&sample.y1, &params);
        if let Some(f) = &trace.failure {
            out.failures.push(f.clone());
        }
        if opts.debug {
            out.last_trace = Some(trace);
        }
        let Some(h1) = h1 else { continue };
        match finite_stage(secret, &h1, &opts.finite, rng) {
            Ok(fs) => {
                out.finite_draws += fs.draws;
                out.result = Some(fs.lattice);
                return out;
            }
            Err(e) => out.failures.push(e.to_string()),
        }
    }
    out
}
