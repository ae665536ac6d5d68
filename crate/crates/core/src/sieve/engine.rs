use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{SieveConfig, SieveNoise};
use super::phase::{lift_mod, PhaseQubit, PhaseVector};
use super::target::to_den_units;
use crate::alga::sampler::standard_normal;
use crate::error::{Error, Result};
use crate::lattice::{DualSampler, Lattice};

/// Counters gathered over one sieve run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SieveStats {
    pub qubits_created: u64,
    /// Length-guard rejections, indexed by stage j.
    pub rejections: Vec<u64>,
    pub unpaired_outcomes: u64,
    pub postselect_failures: u64,
    pub collimations: u64,
    /// Peak total length of phase vectors held between recursion steps.
    pub max_live_multipliers: u64,
    pub audit_checks: u64,
    pub audit_violations: u64,
    /// First few violation messages, for diagnosis.
    pub violation_samples: Vec<String>,
    /// Largest ratio max(|Y|,|Z|)/min(|Y|,|Z|) seen after a double-spot collimation.
    pub max_spot_imbalance: f64,
    #[serde(skip)]
    live: u64,
}

impl SieveStats {
    fn hold(&mut self, n: u64) {
        self.live += n;
        self.max_live_multipliers = self.max_live_multipliers.max(self.live);
    }

    fn release(&mut self, n: u64) {
        self.live -= n;
    }

    fn violation(&mut self, msg: String) {
        self.audit_violations += 1;
        if self.violation_samples.len() < 8 {
            self.violation_samples.push(msg);
        }
    }
}

/// Simulated phase-qubit source: uniform H^# multipliers on the grid, with
/// optional rasterized Gaussian label noise.
#[derive(Clone, Debug)]
pub struct QubitFactory {
    den: i128,
    dual: DualSampler,
    noise: SieveNoise,
    /// Standard deviation of the label noise in units of Δ/den = 1/Q.
    sigma_grid: f64,
    delta: i128,
}

impl QubitFactory {
    pub fn new(l: &Lattice, cfg: &SieveConfig) -> QubitFactory {
        let q = BigInt::from(1) << cfg.q_bits as usize;
        // Width G in Fourier-mode units; Q = G² puts the std at G/√(2π) grid steps.
        let g = 2f64.powi(cfg.g_bits as i32);
        let sigma_grid = g * 2f64.powi((cfg.q_bits - 2 * cfg.g_bits) as i32) / (std::f64::consts::TAU).sqrt();
        QubitFactory {
            den: cfg.den(),
            dual: DualSampler::new(l, &q),
            noise: cfg.noise,
            sigma_grid,
            delta: cfg.delta.to_i128().expect("checked by config"),
        }
    }

    pub fn create<R: Rng + ?Sized>(&self, rng: &mut R) -> PhaseVector {
        let y = to_den_units(&self.dual.sample(rng), self.den).expect("samples lie on the grid");
        match self.noise {
            SieveNoise::Exact => PhaseVector::qubit(self.den, &y, None),
            SieveNoise::Gaussian => {
                let noise: Vec<i128> =
                    y.iter().map(|_| (standard_normal(rng) * self.sigma_grid).round() as i128 * self.delta).collect();
                let label: Vec<i128> = y.iter().zip(&noise).map(|(a, e)| (a + e).rem_euclid(self.den)).collect();
                let drift: Vec<i128> = noise.iter().map(|e| -e).collect();
                PhaseVector::qubit(self.den, &label, Some(&drift))
            }
        }
    }
}

pub fn create_qubit<R: Rng + ?Sized>(l: &Lattice, cfg: &SieveConfig, rng: &mut R) -> PhaseVector {
    QubitFactory::new(l, cfg).create(rng)
}

/// Depth-first collimation sieve over a fixed hidden lattice.
pub struct Sieve<'a, R: Rng + ?Sized> {
    cfg: &'a SieveConfig,
    lattice: &'a Lattice,
    factory: QubitFactory,
    rng: &'a mut R,
    pub stats: SieveStats,
}

impl<'a, R: Rng + ?Sized> Sieve<'a, R> {
    pub fn new(lattice: &'a Lattice, cfg: &'a SieveConfig, rng: &'a mut R) -> Self {
        let stats = SieveStats { rejections: vec![0; cfg.km() as usize + 1], ..Default::default() };
        Sieve { cfg, lattice, factory: QubitFactory::new(lattice, cfg), rng, stats }
    }

    pub fn config(&self) -> &SieveConfig {
        self.cfg
    }

    pub fn rng(&mut self) -> &mut R {
        self.rng
    }

    fn fresh_qubit(&mut self) -> Result<PhaseVector> {
        if self.stats.qubits_created >= self.cfg.budgets.max_qubits {
            return Err(Error::BudgetExhausted(format!("qubit budget of {} spent", self.cfg.budgets.max_qubits)));
        }
        self.stats.qubits_created += 1;
        Ok(self.factory.create(self.rng))
    }

    fn base_vector(&mut self, count: u64) -> Result<PhaseVector> {
        let mut pv = self.fresh_qubit()?;
        for _ in 1..count {
            let q = self.fresh_qubit()?;
            pv = pv.tensor(&q)?;
            pv.wrap_trivial();
        }
        Ok(pv)
    }

    /// Algorithm SC for j < km or p = 1. `target` is in units of 1/den.
    pub fn sieve(&mut self, j: u64, p: u8, target: &[i128]) -> Result<PhaseVector> {
        let km = self.cfg.km();
        if j > km || !(p == 1 || p == 2) || (p == 2 && j == km) {
            return Err(Error::InvalidArgument(format!("sieve(j = {j}, p = {p}) outside 0 ≤ j < km for p = 2, j ≤ km for p = 1")));
        }
        let pv = if j == 0 {
            let base = self.base_vector(2 * km + u64::from(p == 2))?;
            if p == 2 {
                base.split_random(target, self.rng)?
            } else {
                base
            }
        } else {
            self.collimated(j, p, target)?
        };
        let mut pv = pv;
        pv.set_stage(j);
        self.audit(&pv, j, p, target);
        Ok(pv)
    }

    /// Steps (a)–(d) of the recursive cases; the length guards loop here.
    fn collimated(&mut self, j: u64, p: u8, target: &[i128]) -> Result<PhaseVector> {
        let (min_len, max_len) = (self.cfg.min_len(), self.cfg.max_len());
        for _ in 0..=self.cfg.budgets.node_retries {
            let a = self.sieve(j - 1, p, target)?;
            self.stats.hold(a.len());
            let b = self.sieve(j - 1, 1, target)?;
            self.stats.hold(b.len());
            let (post, _) = a.tensor_collimate(&b, self.cfg.m, self.rng)?;
            self.stats.release(a.len() + b.len());
            self.stats.collimations += 1;
            self.check_window(&post, j);
            let lens = post.spot_lens();
            if lens.len() == 2 {
                let (lo, hi) = (lens[0].min(lens[1]), lens[0].max(lens[1]));
                let ratio = if lo == 0 { f64::INFINITY } else { hi as f64 / lo as f64 };
                if ratio.is_finite() {
                    self.stats.max_spot_imbalance = self.stats.max_spot_imbalance.max(ratio);
                }
            }
            if lens.iter().any(|&l| l < min_len) {
                self.stats.rejections[j as usize] += 1;
                continue;
            }
            return Ok(if lens.iter().any(|&l| l >= max_len) { post.shorten(min_len, self.rng) } else { post });
        }
        Err(Error::BudgetExhausted(format!("stage {j} rejected {} times", self.cfg.budgets.node_retries + 1)))
    }

    /// Algorithm SC with p = 2 and j = km: an approximate qubit for `target`.
    pub fn sieve_qubit(&mut self, target: &[i128]) -> Result<PhaseQubit> {
        let km = self.cfg.km();
        for _ in 0..=self.cfg.budgets.node_retries {
            let pv = self.collimated(km, 2, target)?;
            self.audit(&pv, km, 2, target);
            match pv.pair(self.rng)? {
                Some(q) => {
                    let bound = 2 * self.cfg.radius(km);
                    self.stats.audit_checks += 1;
                    if q.label_error(target).iter().any(|e| e.abs() > bound) {
                        self.stats.violation("paired qubit farther than 2r from target".into());
                    }
                    return Ok(q);
                }
                None => self.stats.unpaired_outcomes += 1,
            }
        }
        Err(Error::BudgetExhausted("pairing measurement kept returning unpaired outcomes".into()))
    }

    fn check_window(&mut self, pv: &PhaseVector, j: u64) {
        self.stats.audit_checks += 1;
        if pv.radius() != self.cfg.radius(j) {
            self.stats.violation(format!("stage {j}: radius is not 2^(-jm-1)"));
        }
        for v in pv.window_violations() {
            self.stats.violation(format!("stage {j}: {v}"));
        }
    }

    /// Window soundness, radius telescoping, length discipline, the target
    /// offset between spots, and (on true multipliers) H^# membership.
    fn audit(&mut self, pv: &PhaseVector, j: u64, p: u8, target: &[i128]) {
        self.check_window(pv, j);
        let (min_len, max_len) = (self.cfg.min_len(), self.cfg.max_len());
        if pv.spot_count() != usize::from(p) {
            self.stats.violation(format!("stage {j}: expected {p} spots"));
        }
        if pv.spot_lens().iter().any(|l| !(min_len..max_len).contains(l)) {
            self.stats.violation(format!("stage {j}: spot lengths {:?} outside [4^km, 4^(km+1))", pv.spot_lens()));
        }
        if p == 2 && pv.spot_count() == 2 {
            let den = self.cfg.den();
            let (c0, c1) = (pv.spots()[0].center(), pv.spots()[1].center());
            if (0..pv.k()).any(|i| lift_mod(c1[i] - c0[i] - target[i], den) != 0) {
                self.stats.violation(format!("stage {j}: second window not offset by the target"));
            }
        }
        for s in 0..pv.spot_count() {
            for (y, _) in pv.true_multipliers(s) {
                if !self.in_dual(&y) {
                    self.stats.violation(format!("stage {j}: multiplier outside H^#"));
                    break;
                }
            }
        }
    }

    /// Mᵀy ≡ 0 (mod den) for y in units of 1/den.
    fn in_dual(&self, y: &[i128]) -> bool {
        let den = BigInt::from(self.cfg.den());
        self.lattice.basis().columns().iter().all(|col| {
            let dot: BigInt = col.iter().zip(y).map(|(m, v)| m * BigInt::from(*v)).sum();
            (dot % &den).is_zero()
        })
    }
}
