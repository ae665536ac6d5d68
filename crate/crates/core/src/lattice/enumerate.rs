use num_bigint::BigInt;
use num_traits::Zero;

use super::lll::gram_schmidt;
use crate::error::{Error, Result};
use crate::exact::matrix::RatMatrix;
use crate::exact::rational::{rat_dot, rat_sq_norm, round_half_up, Rat};

/// Fincke–Pohst enumeration: every nonzero coefficient vector x with
/// ‖B·x‖² ≤ `radius_sq`, for linearly independent columns B. Reduce B first;
/// the walk is exact but its size depends on the basis quality. Fails once
/// more than `limit` vectors are found.
pub fn short_vectors(basis: &RatMatrix, radius_sq: &Rat, limit: usize) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.cols();
    let (star, mu) = gram_schmidt(basis);
    let norms: Vec<Rat> = star.iter().map(|s| rat_dot(s, s)).collect();
    if norms.iter().any(Zero::is_zero) {
        return Err(Error::DependentColumns);
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    if n > 0 {
        walk(n - 1, &norms, &mu, radius_sq.clone(), &mut x, &mut out, limit)?;
    }
    Ok(out)
}

fn walk(
    i: usize,
    norms: &[Rat],
    mu: &[Vec<Rat>],
    rem: Rat,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
    limit: usize,
) -> Result<()> {
    let n = x.len();
    let center = -(i + 1..n).fold(Rat::zero(), |acc, j| acc + &mu[j][i] * Rat::from_integer(x[j].clone()));
    let cost = |xi: &BigInt| {
        let d = Rat::from_integer(xi.clone()) - &center;
        &d * &d * &norms[i]
    };
    let start = round_half_up(&center);
    for dir in [1i32, -1] {
        let mut xi = if dir == 1 { start.clone() } else { &start - 1 };
        loop {
            let c = cost(&xi);
            if c > rem {
                break;
            }
            x[i] = xi.clone();
            if i == 0 {
                if x.iter().any(|v| !v.is_zero()) {
                    if out.len() >= limit {
                        return Err(Error::BudgetExhausted(format!("more than {limit} lattice vectors in the ball")));
                    }
                    out.push(x.clone());
                }
            } else {
                walk(i - 1, norms, mu, &rem - &c, x, out, limit)?;
            }
            xi += dir;
        }
    }
    x[i] = BigInt::zero();
    Ok(())
}

/// Squared successive minima λ₁² ≤ … ≤ λₙ² of the lattice spanned by the
/// columns, by exhaustive enumeration up to the longest basis vector.
pub fn successive_minima_sq(basis: &RatMatrix, limit: usize) -> Result<Vec<Rat>> {
    let n = basis.cols();
    let radius = basis.columns().iter().map(|c| rat_sq_norm(c)).max().unwrap_or_else(Rat::zero);
    let mut vecs: Vec<(Rat, Vec<Rat>)> = short_vectors(basis, &radius, limit)?
        .into_iter()
        .map(|x| {
            let xr: Vec<Rat> = x.into_iter().map(Rat::from_integer).collect();
            let v = basis.mul_vec(&xr);
            (rat_sq_norm(&v), v)
        })
        .collect();
    vecs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    let mut minima = Vec::with_capacity(n);
    for (nsq, v) in vecs {
        if minima.len() == n {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(v);
        let m = RatMatrix::from_cols(basis.rows(), &trial).expect("consistent rows");
        if m.rank() == trial.len() {
            chosen = trial;
            minima.push(nsq);
        }
    }
    Ok(minima)
}

/// Rank of the set of lattice vectors with squared norm at most `radius_sq`.
pub fn short_rank(basis: &RatMatrix, radius_sq: &Rat, limit: usize) -> Result<(usize, Vec<Vec<Rat>>)> {
    let vecs: Vec<Vec<Rat>> = short_vectors(basis, radius_sq, limit)?
        .into_iter()
        .map(|x| basis.mul_vec(&x.into_iter().map(Rat::from_integer).collect::<Vec<_>>()))
        .collect();
    if vecs.is_empty() {
        return Ok((0, vecs));
    }
    let m = RatMatrix::from_cols(basis.rows(), &vecs)?;
    Ok((m.rank(), vecs))
}

/// Sanity helper for tests: whether ‖v‖² ≤ r² for a vector and a bound.
pub fn within(v: &[Rat], radius_sq: &Rat) -> bool {
    &rat_sq_norm(v) <= radius_sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::exact::IntMatrix;

    /// Independent oracle: brute force over a coefficient box.
    fn brute(b: &RatMatrix, r2: &Rat, bound: i64) -> usize {
        let n = b.cols();
        let mut count = 0;
        let total = (2 * bound + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let x: Vec<Rat> = (0..n)
                .map(|_| {
                    let v = c % (2 * bound + 1) - bound;
                    c /= 2 * bound + 1;
                    Rat::from_integer(v.into())
                })
                .collect();
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            if within(&b.mul_vec(&x), r2) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn matches_brute_force() {
        let b = IntMatrix::from_i64(&[&[3, 1, 0], &[1, 4, 2], &[0, 1, 5]]).to_rat();
        for r in [1, 9, 17, 30, 60] {
            let r2 = rat(r, 1);
            assert_eq!(short_vectors(&b, &r2, 10_000).unwrap().len(), brute(&b, &r2, 6), "r² = {r}");
        }
    }

    #[test]
    fn minima_of_simple_lattices() {
        let b = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).to_rat();
        assert_eq!(successive_minima_sq(&b, 1000).unwrap(), vec![rat(4, 1), rat(9, 1)]);
        // Skewed basis of ℤ²: both minima are 1.
        let z = IntMatrix::from_i64(&[&[1, 5], &[0, 1]]).to_rat();
        assert_eq!(successive_minima_sq(&z, 1000).unwrap(), vec![rat(1, 1), rat(1, 1)]);
        let (rank, _) = short_rank(&b, &rat(5, 1), 100).unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn limit_is_enforced() {
        let b = RatMatrix::identity(3);
        assert!(short_vectors(&b, &rat(100, 1), 10).is_err());
    }
}
