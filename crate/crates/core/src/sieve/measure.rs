use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{sieve_config, SieveConfig};
use super::engine::{Sieve, SieveStats};
use super::phase::PhaseQubit;
use super::target::{build_target_group, to_den_units, CyclicFactor, TargetGroup};
use crate::error::{Error, Result};
use crate::exact::matrix::IntMatrix;
use crate::exact::normal_form::{diagonal, hnf_basis, snf};
use crate::exact::rational::Rat;
use crate::lattice::{babai, default_delta, lll, Lattice};

/// Outcome distribution of the ℤ/d Fourier measurement on
/// Σ_{j<d} exp(2πi·μ_j·s)|j⟩, where `phases[j]` = μ_j·s mod 1.
pub fn fourier_distribution(phases: &[f64]) -> Vec<f64> {
    let d = phases.len();
    let mut probs: Vec<f64> = (0..d)
        .map(|c| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, ph) in phases.iter().enumerate() {
                // Reduce j·c mod d before dividing to keep the angle accurate.
                let angle = std::f64::consts::TAU * (ph - ((j * c) % d) as f64 / d as f64);
                re += angle.cos();
                im += angle.sin();
            }
            (re * re + im * im) / (d * d) as f64
        })
        .collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    probs
}

/// (μ·s mod den)/den as a float.
fn phase_of(mu: &[i128], s: &[BigInt], den: i128) -> f64 {
    let dot: BigInt = mu.iter().zip(s).map(|(m, x)| BigInt::from(*m) * x).sum();
    let r = dot.mod_floor(&BigInt::from(den));
    r.to_f64().unwrap_or(0.0) / den as f64
}

/// Combines approximate qubits for 2^ℓ·gen (ℓ < e) into a ℤ/d phase vector by
/// post-selection, then samples its Fourier measurement. Returns the residue c.
pub fn assemble_cyclic<R: Rng + ?Sized>(factor: &CyclicFactor, secret: &[BigInt], sieve: &mut Sieve<'_, R>) -> Result<u64> {
    let d = factor
        .order
        .to_u64()
        .filter(|&d| d <= 1 << 24)
        .ok_or_else(|| Error::ParameterCeiling(format!("cyclic factor of order {} is too large", factor.order)))?;
    let e = factor.qubits();
    let den = sieve.config().den();
    let gen = to_den_units(&factor.generator, den)?;
    let retries = sieve.config().budgets.postselect_retries;
    for _ in 0..=retries {
        let mut qubits: Vec<PhaseQubit> = Vec::with_capacity(e as usize);
        for l in 0..e {
            let target: Vec<i128> = gen.iter().map(|g| (g << l).rem_euclid(den)).collect();
            qubits.push(sieve.sieve_qubit(&target)?);
        }
        // Boolean post-selection onto indices < d; equal magnitudes make this d/2^e.
        let idx = sieve.rng().gen_range(0..1u64 << e);
        if idx >= d {
            sieve.stats.postselect_failures += 1;
            continue;
        }
        let diffs: Vec<Vec<i128>> = qubits.iter().map(PhaseQubit::true_difference).collect();
        let phases: Vec<f64> = (0..d)
            .map(|j| {
                let mut mu = vec![0i128; gen.len()];
                for (l, dl) in diffs.iter().enumerate() {
                    if j >> l & 1 == 1 {
                        for (m, x) in mu.iter_mut().zip(dl) {
                            *m = (*m + x).rem_euclid(den);
                        }
                    }
                }
                phase_of(&mu, secret, den)
            })
            .collect();
        let probs = fourier_distribution(&phases);
        let u: f64 = sieve.rng().gen();
        let mut acc = 0.0;
        for (c, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Ok(c as u64);
            }
        }
        return Ok(d - 1);
    }
    Err(Error::BudgetExhausted(format!("post-selection failed {} times for order {d}", retries + 1)))
}

/// Solves d_D-congruences a_D·s ≡ c_D (mod d_D), then picks a solution with
/// ‖s‖∞ ≤ 2^{t−1} by Babai rounding against a reduced basis of A^# and a
/// {−1,0,1} search around it.
pub fn lift_shift(residues: &[u64], a: &TargetGroup, t: u64) -> Result<Vec<BigInt>> {
    let k = a.k;
    if residues.len() != a.factors.len() {
        return Err(Error::InvalidArgument("one residue per cyclic factor is required".into()));
    }
    let f = a.factors.len();
    let bound = BigInt::from(1) << (t - 1) as usize;
    // [Aᵀ | −diag(d)]·(s, z) = c.
    let sys = IntMatrix::from_fn(f, k + f, |i, j| {
        if j < k {
            a.factors[i].scaled_generator()[j].clone()
        } else if j - k == i {
            -a.factors[i].order.clone()
        } else {
            BigInt::zero()
        }
    });
    let c: Vec<BigInt> = residues.iter().map(|&r| BigInt::from(r)).collect();
    let (s0, kernel) = if f == 0 {
        (vec![BigInt::zero(); k], IntMatrix::identity(k))
    } else {
        let (dm, v, w) = snf(&sys);
        let dd = diagonal(&dm);
        let vc = v.mul_vec(&c);
        let mut u = vec![BigInt::zero(); k + f];
        for (i, x) in vc.iter().enumerate() {
            let di = dd.get(i).cloned().unwrap_or_else(BigInt::zero);
            if di.is_zero() {
                if !x.is_zero() {
                    return Err(Error::Infeasible("congruence system has no solution".into()));
                }
            } else if !(x % &di).is_zero() {
                return Err(Error::Infeasible("congruence system has no solution".into()));
            } else {
                u[i] = x / &di;
            }
        }
        let sol = w.mul_vec(&u);
        let rank = dd.iter().filter(|x| !x.is_zero()).count();
        let ker = w.select_cols(&(rank..k + f).collect::<Vec<_>>()).select_rows(&(0..k).collect::<Vec<_>>());
        (sol[..k].to_vec(), hnf_basis(&ker))
    };
    let reduced = lll(&kernel.to_rat(), &default_delta())?;
    let target: Vec<Rat> = s0.iter().cloned().map(Rat::from_integer).collect();
    let z = babai(&reduced, &target);
    let red_int = reduced.to_int().expect("integral lattice");
    let shift = red_int.mul_vec(&z);
    let base: Vec<BigInt> = s0.iter().zip(&shift).map(|(a, b)| a - b).collect();
    let cols = red_int.columns();
    let n = cols.len();
    let mut best: Option<(BigInt, BigInt, Vec<BigInt>)> = None;
    for code in 0..3usize.pow(n as u32) {
        let mut cand = base.clone();
        let mut x = code;
        for col in &cols {
            let eps = (x % 3) as i64 - 1;
            x /= 3;
            if eps != 0 {
                for (ci, bi) in cand.iter_mut().zip(col) {
                    *ci += bi * eps;
                }
            }
        }
        let inf = cand.iter().map(|v| v.abs()).max().unwrap_or_default();
        if inf > bound {
            continue;
        }
        let l2: BigInt = cand.iter().map(|v| v * v).sum();
        let key = (inf, l2, cand);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.map(|(_, _, s)| s)
        .ok_or_else(|| Error::Infeasible(format!("no solution with ‖s‖∞ ≤ 2^{}", t - 1)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftOutcome {
    pub recovered: Option<Vec<BigInt>>,
    /// recovered ≡ secret (mod H).
    pub success: bool,
    pub residues: Vec<u64>,
    pub stats: SieveStats,
    pub error: Option<String>,
}

/// Full orchestration: target group, one cyclic assembly per factor, CVP lift.
pub fn recover_shift<R: Rng + ?Sized>(secret: &[BigInt], l: &Lattice, t: u64, rng: &mut R) -> Result<ShiftOutcome> {
    let cfg = sieve_config(l, t)?;
    recover_shift_with(secret, l, &cfg, rng)
}

pub fn recover_shift_with<R: Rng + ?Sized>(secret: &[BigInt], l: &Lattice, cfg: &SieveConfig, rng: &mut R) -> Result<ShiftOutcome> {
    let bound = BigInt::from(1) << (cfg.t - 1) as usize;
    if secret.len() != l.k() {
        return Err(Error::Dimension(format!("shift has {} coordinates, lattice dimension is {}", secret.len(), l.k())));
    }
    if secret.iter().any(|x| x.abs() > bound) {
        return Err(Error::InvalidArgument(format!("shift exceeds 2^{} in some coordinate", cfg.t - 1)));
    }
    let a = build_target_group(l, cfg.torsion_t);
    let mut sieve = Sieve::new(l, cfg, rng);
    let mut residues = Vec::with_capacity(a.factors.len());
    let mut error = None;
    for f in &a.factors {
        match assemble_cyclic(f, secret, &mut sieve) {
            Ok(c) => residues.push(c),
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
    }
    let recovered = if error.is_none() {
        match lift_shift(&residues, &a, cfg.t) {
            Ok(s) => Some(s),
            Err(e) => {
                error = Some(e.to_string());
                None
            }
        }
    } else {
        None
    };
    let success = recovered.as_ref().is_some_and(|s| l.coset_canonical(s) == l.coset_canonical(secret));
    Ok(ShiftOutcome { recovered, success, residues, stats: sieve.stats, error })
}
