//! Classical post-processing of one Fourier sample: lattice reduction of the
//! flattened sample lattice, extraction of the stripe directions, and
//! continued-fraction denoising into an integral basis of H₁ = H_ℝ ∩ ℤᵏ.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::params::AlgAParams;
use crate::exact::contfrac::legendre_reconstruct;
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::normal_form::snf_rational;
use crate::exact::rational::{rat_sq_norm, Rat};
use crate::lattice::lll::{default_delta, lll};
use crate::lattice::{Lattice, TorusVec};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryTrace {
    pub e: Option<RatMatrix>,
    pub lll_basis: Option<RatMatrix>,
    pub b1: Option<RatMatrix>,
    /// Recovered rank ℓ; the number of short vectors is k + 1 − ℓ.
    pub ell_guess: Option<usize>,
    /// Rows of B₁ forming B₂, ascending; the last row index is always k.
    pub b2_rows: Vec<usize>,
    pub b2: Option<RatMatrix>,
    pub b3: Option<RatMatrix>,
    pub b4: Option<RatMatrix>,
    pub a4: Option<RatMatrix>,
    pub a5: Option<RatMatrix>,
    pub a6: Option<IntMatrix>,
    pub failure: Option<String>,
}

/// Row selection for B₂: the last row first, then greedy complete pivoting
/// over the remaining rows so that |det B₂| stays large.
fn select_b2_rows(b1: &RatMatrix) -> Option<Vec<usize>> {
    let (rows, cols) = (b1.rows(), b1.cols());
    let last = rows - 1;
    let mut a = b1.to_rows();
    let mut used_rows = vec![false; rows];
    let mut used_cols = vec![false; cols];
    let mut picked = Vec::with_capacity(cols);
    for step in 0..cols {
        let candidates: Vec<usize> = if step == 0 { vec![last] } else { (0..last).filter(|&i| !used_rows[i]).collect() };
        let mut best: Option<(usize, usize)> = None;
        for &i in &candidates {
            for j in (0..cols).filter(|&j| !used_cols[j]) {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() > a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = best?;
        used_rows[pi] = true;
        used_cols[pj] = true;
        picked.push(pi);
        let pivot_row = a[pi].clone();
        for i in 0..rows {
            if used_rows[i] || a[i][pj].is_zero() {
                continue;
            }
            let f = &a[i][pj] / &pivot_row[pj];
            for j in 0..cols {
                let t = &f * &pivot_row[j];
                a[i][j] -= t;
            }
        }
    }
    picked.sort_unstable();
    Some(picked)
}

/// E: the identity on ℤᵏ with the last column (lift(y₁), 1/T).
pub fn sample_lattice(y1: &TorusVec, p: &AlgAParams) -> RatMatrix {
    let k = y1.dim();
    let lift = y1.lift();
    let t = Rat::new(BigInt::one(), p.t());
    RatMatrix::from_fn(k + 1, k + 1, |i, j| match (i, j) {
        (i, j) if j == k && i < k => lift[i].clone(),
        (i, j) if i == k && j == k => t.clone(),
        (i, j) if i == j => Rat::one(),
        _ => Rat::zero(),
    })
}

/// Runs the reduction and denoising steps on one sample. Returns H₁ on
/// success; the trace records every intermediate matrix either way.
pub fn recover_colattice(y1: &TorusVec, p: &AlgAParams) -> (Option<Lattice>, RecoveryTrace) {
    let mut trace = RecoveryTrace::default();
    let h1 = run(y1, p, &mut trace);
    if let Err(msg) = &h1 {
        trace.failure = Some(msg.clone());
    }
    (h1.ok(), trace)
}

fn run(y1: &TorusVec, p: &AlgAParams, trace: &mut RecoveryTrace) -> Result<Lattice, String> {
    let k = y1.dim();
    if k != p.k {
        return Err(format!("sample has dimension {k}, parameters expect {}", p.k));
    }
    let e = sample_lattice(y1, p);
    trace.e = Some(e.clone());

    let reduced = lll(&e, &default_delta()).map_err(|err| err.to_string())?;
    trace.lll_basis = Some(reduced.clone());

    let r_sq = Rat::new(BigInt::one(), p.r() * p.r());
    let cols = reduced.columns();
    let short = cols.iter().take_while(|b| rat_sq_norm(b) <= r_sq).count();
    if short == 0 {
        return Err("no basis vector within the cutoff radius".into());
    }
    let ell = k + 1 - short;
    trace.ell_guess = Some(ell);
    let b1 = reduced.select_cols(&(0..short).collect::<Vec<_>>());
    trace.b1 = Some(b1.clone());

    let rows = select_b2_rows(&b1).ok_or("no nonsingular row selection containing the last row")?;
    let b2 = b1.select_rows(&rows);
    trace.b2_rows = rows.clone();
    trace.b2 = Some(b2.clone());
    let b3 = &b1 * &b2.inverse().map_err(|err| err.to_string())?;
    trace.b3 = Some(b3.clone());

    // Rows outside B₂ index the free coordinates; B₂'s rows other than the
    // last index the dependent ones.
    let free: Vec<usize> = (0..k).filter(|i| !rows.contains(i)).collect();
    let dep: Vec<usize> = rows.iter().copied().filter(|&i| i < k).collect();
    debug_assert_eq!(free.len(), ell);
    let b4 = b3.select_rows(&free).select_cols(&(0..dep.len()).collect::<Vec<_>>());
    trace.b4 = Some(b4.clone());

    let cutoff = p.r();
    let mut a4 = RatMatrix::zeros(ell, dep.len());
    for i in 0..ell {
        for j in 0..dep.len() {
            let rec = legendre_reconstruct(b4.get(i, j), &cutoff);
            if !rec.verified {
                trace.a4 = Some(a4);
                return Err(format!("entry ({i}, {j}) of B₄ has no verified reconstruction"));
            }
            a4.set(i, j, rec.value);
        }
    }
    trace.a4 = Some(a4.clone());

    let mut a5 = RatMatrix::zeros(k, ell);
    for (i, &f) in free.iter().enumerate() {
        a5.set(f, i, Rat::one());
        for (j, &d) in dep.iter().enumerate() {
            a5.set(d, i, -a4.get(i, j).clone());
        }
    }
    trace.a5 = Some(a5.clone());

    let a6 = if ell == 0 {
        IntMatrix::zeros(k, 0)
    } else {
        let (_, v, _) = snf_rational(&a5);
        let vinv = v.to_rat().inverse().map_err(|err| err.to_string())?;
        vinv.to_int()
            .ok_or("inverse of a unimodular matrix is not integral")?
            .select_cols(&(0..ell).collect::<Vec<_>>())
    };
    trace.a6 = Some(a6.clone());
    Ok(Lattice::from_generators(&a6))
}
