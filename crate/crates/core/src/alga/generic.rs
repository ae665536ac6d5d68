//! Certificate that a noiseless Fourier sample is generic: the sample lattice
//! has a full set of short multiples and nothing else short, so the reduction
//! step provably isolates the right subspace.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::params::AlgAParams;
use super::recovery::sample_lattice;
use crate::error::Result;
use crate::exact::matrix::RatMatrix;
use crate::exact::normal_form::snf;
use crate::exact::matrix::IntMatrix;
use crate::exact::rational::{rat_dot, rat_sq_norm, Rat};
use crate::lattice::lll::{default_delta, gram_schmidt, lll_with_transform};
use crate::lattice::{short_vectors, Lattice, TorusVec};

const ENUM_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genericity {
    /// Some torus numerator is a unit mod Q (vacuous for full rank).
    pub torus_denominator_full: bool,
    /// Rank of the lattice vectors of length ≤ √2/R₁.
    pub witness_rank: usize,
    /// k + 1 − ℓ.
    pub expected_rank: usize,
    /// No lattice vector of length ≤ 1/R leaves the witness span.
    pub isolated: bool,
}

impl Genericity {
    pub fn is_generic(&self) -> bool {
        self.torus_denominator_full && self.witness_rank == self.expected_rank && self.isolated
    }
}

/// Checks a sample `y1` of the dual of a rank-`rank` lattice. `torus_numerators`
/// are the numerators u of the torus part N·u/Q of the planted dual point.
pub fn certify_generic(y1: &TorusVec, rank: usize, p: &AlgAParams, torus_numerators: &[BigInt]) -> Result<Genericity> {
    let k = y1.dim();
    let q = p.q();
    let torus_denominator_full = torus_numerators.is_empty() || torus_numerators.iter().any(|u| u.gcd(&q).is_one());
    let expected_rank = k + 1 - rank;

    let (reduced, _) = lll_with_transform(&sample_lattice(y1, p), &default_delta())?;
    let witness_sq = Rat::new(BigInt::from(2), p.r1() * p.r1());
    let mut g = Genericity { torus_denominator_full, witness_rank: 0, expected_rank, isolated: false };

    // A reduced-basis prefix inside the ball is already a primitive witness
    // set; only when it falls short is the ball enumerated.
    let cols = reduced.columns();
    let prefix = cols.iter().take_while(|b| rat_sq_norm(b) <= witness_sq).count();
    let (span, rest) = if prefix >= expected_rank {
        g.witness_rank = prefix;
        (reduced.select_cols(&(0..prefix).collect::<Vec<_>>()), reduced.select_cols(&(prefix..k + 1).collect::<Vec<_>>()))
    } else {
        let coeffs = match short_vectors(&reduced, &witness_sq, ENUM_LIMIT) {
            Ok(c) if !c.is_empty() => c,
            _ => {
                g.witness_rank = prefix;
                return Ok(g);
            }
        };
        let sat = Lattice::from_generators(&IntMatrix::from_cols(k + 1, &coeffs)?).saturation();
        g.witness_rank = sat.rank();
        let (_, v, _) = snf(sat.basis());
        let vinv = v.to_rat().inverse()?;
        let r = g.witness_rank;
        (&reduced * &vinv.select_cols(&(0..r).collect::<Vec<_>>()), &reduced * &vinv.select_cols(&(r..k + 1).collect::<Vec<_>>()))
    };
    if g.witness_rank != expected_rank {
        return Ok(g);
    }
    if rest.cols() == 0 {
        g.isolated = true;
        return Ok(g);
    }
    // Anything of length ≤ 1/R outside the witness span projects to a nonzero
    // vector of the same length bound in its orthogonal complement.
    let (star, _) = gram_schmidt(&span);
    let projected: Vec<Vec<Rat>> = rest
        .columns()
        .into_iter()
        .map(|mut x| {
            for s in &star {
                let nn = rat_dot(s, s);
                if nn.is_zero() {
                    continue;
                }
                let c = rat_dot(&x, s) / nn;
                for (xi, si) in x.iter_mut().zip(s) {
                    *xi -= &c * si;
                }
            }
            x
        })
        .collect();
    let proj = RatMatrix::from_cols(k + 1, &projected)?;
    let (proj_red, _) = lll_with_transform(&proj, &default_delta())?;
    let iso_sq = Rat::new(BigInt::one(), p.r() * p.r());
    g.isolated = short_vectors(&proj_red, &iso_sq, 1)?.is_empty();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alga::params::schedule;
    use crate::alga::sampler::{FourierSampler, NoiseMode};
    use crate::exact::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_denominator_sample_is_not_generic() {
        // y = (1/2, 0) for the trivial lattice of ℤ²: the multiples never fill a
        // second direction, whatever the schedule.
        let p = schedule(1, 2).unwrap();
        let y = TorusVec::new([rat(1, 2), rat(0, 1)]);
        let g = certify_generic(&y, 0, &p, &[BigInt::from(2), BigInt::zero()]).unwrap();
        assert!(!g.is_generic());
    }

    #[test]
    fn typical_samples_are_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let secret = Lattice::from_columns(2, &[vec![6, 2]]);
        let p = schedule(secret.answer_bound(), 2).unwrap();
        let sampler = FourierSampler::new(&secret, &p, NoiseMode::None, true);
        let generic = (0..10)
            .filter(|_| {
                let s = sampler.sample(&mut rng);
                let g = certify_generic(&s.y1, 1, &p, s.torus_numerators.as_deref().unwrap()).unwrap();
                let ok = crate::alga::recover_colattice(&s.y1, &p).0.is_some();
                assert!(!g.is_generic() || ok, "certified sample failed to recover");
                g.witness_rank == g.expected_rank && g.isolated
            })
            .count();
        assert_eq!(generic, 10);
    }
}
