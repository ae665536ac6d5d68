use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::descriptor::{HspDescriptor, ShiftDescriptor};
use super::report::{matrix_json, vector_json, ExperimentReport, TrialRecord, SCHEMA_VERSION};
use crate::alga::{end_to_end, schedule_with, EndToEndOptions, RecoveryTrace, ScheduleOptions};
use crate::error::Result;
use crate::sieve::{recover_shift_with, SieveConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock times. Off by default so reports stay reproducible.
    pub timing: bool,
    /// Attach the last recovery trace to each HSP trial.
    pub debug_trace: bool,
}

/// Independent stream `trial` of the generator seeded by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn failed(trial: u64, err: String, detail: Value) -> TrialRecord {
    TrialRecord { trial, success: false, error: Some(err), wall_ms: None, detail }
}

/// Runs every trial, in parallel, and collects the records sorted by index.
fn fan_out<F>(trials: u64, f: F) -> Vec<TrialRecord>
where
    F: Fn(u64) -> TrialRecord + Sync + Send,
{
    let mut records: Vec<TrialRecord> = (0..trials).into_par_iter().map(f).collect();
    records.sort_by_key(|r| r.trial);
    records
}

fn success_rate(records: &[TrialRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.success).count() as f64 / records.len() as f64
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn field_u64(r: &TrialRecord, key: &str) -> Option<u64> {
    r.detail.get(key).and_then(Value::as_u64)
}

fn trace_json(t: &RecoveryTrace) -> Value {
    let m = |x: &Option<crate::exact::matrix::RatMatrix>| x.as_ref().map(matrix_json);
    json!({
        "e": m(&t.e),
        "lll_basis": m(&t.lll_basis),
        "b1": m(&t.b1),
        "ell_guess": t.ell_guess,
        "b2_rows": t.b2_rows,
        "b2": m(&t.b2),
        "b3": m(&t.b3),
        "b4": m(&t.b4),
        "a4": m(&t.a4),
        "a5": m(&t.a5),
        "a6": t.a6.as_ref().map(matrix_json),
        "failure": t.failure,
    })
}

/// Planted-lattice experiment: draw a secret, simulate the Fourier samples,
/// recover, and compare exactly.
pub fn run_hsp(desc: &HspDescriptor, opts: RunOptions) -> Result<ExperimentReport> {
    let defaults = ScheduleOptions::default();
    let sched = ScheduleOptions {
        c: desc.schedule.c.unwrap_or(defaults.c),
        retries: desc.schedule.retries.unwrap_or(defaults.retries),
        ..defaults
    };
    // Validate a fixed secret up front so bad descriptors fail loudly.
    if let super::SecretSpec::Fixed { .. } = desc.secret {
        let secret = desc.secret.draw(desc.k, &mut trial_rng(desc.seed, 0))?;
        schedule_with(desc.schedule.n.unwrap_or(secret.answer_bound()), desc.k, &sched)?;
    }
    let start = Instant::now();
    let records = fan_out(desc.trials, |trial| {
        let t0 = Instant::now();
        let mut rng = trial_rng(desc.seed, trial);
        let secret = match desc.secret.draw(desc.k, &mut rng) {
            Ok(s) => s,
            Err(e) => return failed(trial, e.to_string(), Value::Null),
        };
        let n = desc.schedule.n.unwrap_or(secret.answer_bound());
        let secret_json = matrix_json(secret.basis());
        let p = match schedule_with(n, desc.k, &sched) {
            Ok(p) => p,
            Err(e) => return failed(trial, e.to_string(), json!({ "secret": secret_json, "n": n })),
        };
        let e2e = EndToEndOptions { noise: desc.noise, debug: opts.debug_trace, ..EndToEndOptions::default() };
        let out = end_to_end(&secret, &p, &e2e, &mut rng);
        let success = out.result.as_ref() == Some(&secret);
        let mut detail = json!({
            "secret": secret_json,
            "rank": secret.rank(),
            "n": n,
            "samples": out.samples,
            "finite_draws": out.finite_draws,
            "recovered": out.result.as_ref().map(|l| matrix_json(l.basis())),
            "failures": out.failures,
        });
        if let Some(t) = &out.last_trace {
            detail["trace"] = trace_json(t);
        }
        let error = match (&out.result, success) {
            (_, true) => None,
            (Some(_), false) => Some("recovered lattice differs from the secret".to_string()),
            (None, false) => Some("retry budget exhausted".to_string()),
        };
        TrialRecord { trial, success, error, wall_ms: opts.timing.then(|| elapsed_ms(t0)), detail }
    });
    let summary = json!({
        "trials": records.len(),
        "successes": records.iter().filter(|r| r.success).count(),
        "mean_samples": mean(records.iter().filter_map(|r| field_u64(r, "samples")).map(|x| x as f64)),
        "mean_finite_draws": mean(records.iter().filter_map(|r| field_u64(r, "finite_draws")).map(|x| x as f64)),
    });
    Ok(ExperimentReport {
        schema: SCHEMA_VERSION.into(),
        command: "hsp-recover".into(),
        parameters: serde_json::to_value(desc).expect("descriptors serialize"),
        seed: desc.seed,
        success_rate: success_rate(&records),
        trials: records,
        summary,
        wall_ms: opts.timing.then(|| elapsed_ms(start)),
    })
}

pub fn shift_config(desc: &ShiftDescriptor) -> Result<SieveConfig> {
    let l = desc.lattice()?;
    let cfg = SieveConfig::build(&l, desc.t, desc.m)?.with_noise(desc.noise);
    Ok(match &desc.budgets {
        Some(b) => cfg.with_budgets(b.clone()),
        None => cfg,
    })
}

/// Planted-shift experiment through the sieve.
pub fn run_shift(desc: &ShiftDescriptor, opts: RunOptions) -> Result<ExperimentReport> {
    let l = desc.lattice()?;
    let cfg = shift_config(desc)?;
    let start = Instant::now();
    let records = fan_out(desc.trials, |trial| {
        let t0 = Instant::now();
        let mut rng = trial_rng(desc.seed, trial);
        let shift = match desc.shift.draw(desc.k, desc.t, &mut rng) {
            Ok(s) => s,
            Err(e) => return failed(trial, e.to_string(), Value::Null),
        };
        let out = match recover_shift_with(&shift, &l, &cfg, &mut rng) {
            Ok(o) => o,
            Err(e) => return failed(trial, e.to_string(), json!({ "shift": vector_json(&shift) })),
        };
        let s = &out.stats;
        let detail = json!({
            "shift": vector_json(&shift),
            "recovered": out.recovered.as_ref().map(|r| vector_json(r)),
            "residues": out.residues,
            "qubits_created": s.qubits_created,
            "max_live_multipliers": s.max_live_multipliers,
            "rejections": s.rejections,
            "unpaired_outcomes": s.unpaired_outcomes,
            "postselect_failures": s.postselect_failures,
            "collimations": s.collimations,
            "audit_checks": s.audit_checks,
            "audit_violations": s.audit_violations,
            "max_spot_imbalance": s.max_spot_imbalance,
        });
        let error = out.error.clone().or_else(|| (!out.success).then(|| "recovered shift lies in a different coset".into()));
        TrialRecord { trial, success: out.success, error, wall_ms: opts.timing.then(|| elapsed_ms(t0)), detail }
    });
    let stages = cfg.km() as usize + 1;
    let mut rejections = vec![0u64; stages];
    for r in &records {
        if let Some(v) = r.detail.get("rejections").and_then(Value::as_array) {
            for (j, x) in v.iter().enumerate().take(stages) {
                rejections[j] += x.as_u64().unwrap_or(0);
            }
        }
    }
    let summary = json!({
        "trials": records.len(),
        "successes": records.iter().filter(|r| r.success).count(),
        "mean_qubits_created": mean(records.iter().filter_map(|r| field_u64(r, "qubits_created")).map(|x| x as f64)),
        "max_live_multipliers": records.iter().filter_map(|r| field_u64(r, "max_live_multipliers")).max(),
        "rejections_by_stage": rejections,
        "audit_violations": records.iter().filter_map(|r| field_u64(r, "audit_violations")).sum::<u64>(),
        "derived": {
            "m": cfg.m,
            "km": cfg.km(),
            "torsion_t": cfg.torsion_t,
            "q_bits": cfg.q_bits,
            "delta": cfg.delta.to_string(),
        },
    });
    Ok(ExperimentReport {
        schema: SCHEMA_VERSION.into(),
        command: "shift-recover".into(),
        parameters: serde_json::to_value(desc).expect("descriptors serialize"),
        seed: desc.seed,
        success_rate: success_rate(&records),
        trials: records,
        summary,
        wall_ms: opts.timing.then(|| elapsed_ms(start)),
    })
}
