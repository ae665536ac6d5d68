//! Exact LLL reduction.
//!
//! The core is the all-integer variant that tracks the Gram determinants
//! `d_i` and the scaled coefficients `λ_ij = d_j μ_ij`, so no rational ever
//! needs normalising. Wide inputs are first reduced on a truncated copy whose
//! transform is then applied to the full-precision basis; the final exact pass
//! certifies the result, so truncation only saves time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::{Matrix, RatMatrix};
use crate::exact::rational::{rat_dot, Rat};

/// Bit width above which a truncated pre-pass is attempted.
const PREPASS_BITS: u64 = 192;

type Cols = Vec<Vec<BigInt>>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

fn round_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    // b > 0: floor((2a + b) / 2b).
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

struct IntLll {
    b: Cols,
    u: Cols,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
    p: BigInt,
    q: BigInt,
}

impl IntLll {
    fn new(b: Cols, delta: &Rat) -> Self {
        let n = b.len();
        let mut u = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in u.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IntLll {
            b,
            u,
            d: vec![BigInt::one(); n + 1],
            lam: vec![vec![BigInt::zero(); n]; n],
            p: delta.numer().clone(),
            q: delta.denom().clone(),
        }
    }

    // Gram–Schmidt data for column k given everything below it.
    fn incorporate(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::DependentColumns);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lam[k][l] * 2u32).abs() <= *dl {
            return;
        }
        let q = round_quotient(&self.lam[k][l], dl);
        let (lo, hi) = self.b.split_at_mut(k);
        axpy(&mut hi[0], &q, &lo[l]);
        let (lo, hi) = self.u.split_at_mut(k);
        axpy(&mut hi[0], &q, &lo[l]);
        self.lam[k][l] -= &q * dl;
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        self.u.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            let new_ik = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            let new_ik1 = (&bb * &t + &lam * &new_ik) / &self.d[k + 1];
            self.lam[i][k] = new_ik;
            self.lam[i][k - 1] = new_ik1;
        }
        self.d[k] = bb;
    }

    fn lovasz_fails(&self, k: usize) -> bool {
        let lhs = &self.q * &self.d[k + 1] * &self.d[k - 1];
        let l = &self.lam[k][k - 1];
        let rhs = &self.p * &self.d[k] * &self.d[k] - &self.q * l * l;
        lhs < rhs
    }

    fn run(&mut self) -> Result<()> {
        let n = self.b.len();
        if n == 0 {
            return Ok(());
        }
        self.incorporate(0)?;
        let mut kmax = 0;
        let mut k = 1;
        while k < n {
            if k > kmax {
                kmax = k;
                self.incorporate(k)?;
            }
            self.reduce(k, k - 1);
            if self.lovasz_fails(k) {
                self.swap(k, kmax);
                k = (k - 1).max(1);
                continue;
            }
            for l in (0..k - 1).rev() {
                self.reduce(k, l);
            }
            k += 1;
        }
        Ok(())
    }
}

fn max_bits(b: &Cols) -> u64 {
    b.iter().flatten().map(|x| x.bits()).max().unwrap_or(0)
}

fn apply(b: &Cols, u: &Cols) -> Cols {
    // Column j of the result is Σ_i u[j][i]·b[i].
    u.iter()
        .map(|coef| {
            let mut out = vec![BigInt::zero(); b.first().map_or(0, Vec::len)];
            for (c, col) in coef.iter().zip(b) {
                if !c.is_zero() {
                    for (o, x) in out.iter_mut().zip(col) {
                        *o += c * x;
                    }
                }
            }
            out
        })
        .collect()
}

/// Reduces integer columns, returning the reduced basis and the transform
/// (column `j` of the result is `Σ_i u[j][i]·b[i]`).
fn reduce_int(b: Cols, delta: &Rat) -> Result<(Cols, Cols)> {
    let bits = max_bits(&b);
    let mut pre: Option<Cols> = None;
    if bits > PREPASS_BITS {
        let shift = (bits / 2) as usize;
        let truncated: Cols = b.iter().map(|c| c.iter().map(|x| x >> shift).collect()).collect();
        // A truncated copy may be dependent; then the exact pass does all the work.
        if let Ok((_, u)) = reduce_int(truncated, delta) {
            pre = Some(u);
        }
    }
    let start = match &pre {
        Some(u) => apply(&b, u),
        None => b,
    };
    let mut lll = IntLll::new(start, delta);
    lll.run()?;
    let total = match pre {
        Some(u0) => apply(&u0, &lll.u),
        None => lll.u,
    };
    Ok((lll.b, total))
}

fn check_delta(delta: &Rat) -> Result<()> {
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= Rat::one() {
        return Err(Error::InvalidArgument(format!("LLL parameter {delta} outside (1/4, 1)")));
    }
    Ok(())
}

/// LLL-reduces the columns of `b` exactly, returning the reduced basis and the
/// unimodular transform `U` with `b·U = result`.
pub fn lll_with_transform(b: &RatMatrix, delta: &Rat) -> Result<(RatMatrix, Matrix<BigInt>)> {
    check_delta(delta)?;
    let (scale, m) = b.clear_denominators();
    let (reduced, u) = reduce_int(m.columns(), delta)?;
    let rows = b.rows();
    let out = Matrix::from_fn(rows, reduced.len(), |i, j| Rat::new(reduced[j][i].clone(), scale.clone()));
    let n = u.len();
    let um = Matrix::from_fn(n, n, |i, j| u[j][i].clone());
    Ok((out, um))
}

/// LLL-reduces the columns of `b` with parameter `delta`.
pub fn lll(b: &RatMatrix, delta: &Rat) -> Result<RatMatrix> {
    lll_with_transform(b, delta).map(|(r, _)| r)
}

pub fn default_delta() -> Rat {
    Rat::new(BigInt::from(3), BigInt::from(4))
}

/// Gram–Schmidt vectors and coefficients of the columns of `b`, exactly.
pub fn gram_schmidt(b: &RatMatrix) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    let cols = b.columns();
    let n = cols.len();
    let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let mut v = cols[i].clone();
        for j in 0..i {
            let nj = rat_dot(&star[j], &star[j]);
            if nj.is_zero() {
                continue;
            }
            mu[i][j] = rat_dot(&cols[i], &star[j]) / nj;
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// True when the columns are size-reduced and satisfy the Lovász condition.
pub fn is_lll_reduced(b: &RatMatrix, delta: &Rat) -> bool {
    let (star, mu) = gram_schmidt(b);
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let n = star.len();
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (1..n).all(|k| {
        let lhs = rat_dot(&star[k], &star[k]);
        let prev = rat_dot(&star[k - 1], &star[k - 1]);
        lhs >= (delta - &mu[k][k - 1] * &mu[k][k - 1]) * prev
    })
}
