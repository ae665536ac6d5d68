//! Exact simulation of the finite-group stage: recover H inside H₁ from
//! uniform samples of the finite dual group of the preimage lattice.

use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::normal_form::{diagonal, snf, snf_rational};
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiniteStageOptions {
    /// Maximum number of dual samples per run.
    pub max_draws: u64,
}

impl Default for FiniteStageOptions {
    fn default() -> Self {
        FiniteStageOptions { max_draws: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStageOutcome {
    pub lattice: Lattice,
    pub draws: u64,
    pub index: BigInt,
}

/// {x ∈ ℤˡ : A·x ∈ H}, from the integer kernel of [A | −M].
pub fn preimage(a: &IntMatrix, h: &Lattice) -> Lattice {
    let l = a.cols();
    let m = h.basis();
    let c = a.hcat(&(-m)).expect("row counts agree");
    let (d, _, w) = snf(&c);
    let rank = diagonal(&d).iter().filter(|x| !x.is_zero()).count();
    let kernel = w.select_cols(&(rank..c.cols()).collect::<Vec<_>>());
    Lattice::from_generators(&kernel.select_rows(&(0..l).collect::<Vec<_>>()))
}

/// Integer lattice dual to the lattice generated by ℤˡ and the columns of `g`
/// (rational, ℓ rows): with D = V·[I | g]·W, the dual basis is Vᵀ·diag(1/dᵢ).
pub fn dual_of_generated(g: &RatMatrix) -> Result<IntMatrix> {
    let l = g.rows();
    let gens = RatMatrix::identity(l).hcat(g)?;
    let (d, v, _) = snf_rational(&gens);
    let dd = diagonal(&d);
    let scale = RatMatrix::from_fn(l, l, |i, j| if i == j { dd[i].recip() } else { crate::exact::Rat::zero() });
    (&v.to_rat().transpose() * &scale)
        .to_int()
        .ok_or_else(|| Error::InvalidArgument("generated group does not contain ℤˡ".into()))
}

/// Uniform draws from the finite dual group of a full-rank H' ⊆ ℤˡ.
pub struct FiniteDualSampler {
    reciprocal: RatMatrix,
    index: BigInt,
}

impl FiniteDualSampler {
    pub fn new(h: &Lattice) -> Result<FiniteDualSampler> {
        if h.rank() != h.k() {
            return Err(Error::InvalidArgument("finite dual group needs a full-rank lattice".into()));
        }
        let b = h.basis();
        let index = b.det()?.abs();
        let reciprocal = b.to_rat().inverse()?.transpose();
        Ok(FiniteDualSampler { reciprocal, index })
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Residues `a` in `[0, index)ˡ` cover the whole group (index·H'^• ⊆ ℤˡ).
    pub fn element(&self, a: &[BigInt]) -> Vec<crate::exact::Rat> {
        let ar: Vec<crate::exact::Rat> = a.iter().cloned().map(crate::exact::Rat::from_integer).collect();
        self.reciprocal.mul_vec(&ar).iter().map(crate::exact::rational::frac).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<crate::exact::Rat> {
        let a: Vec<BigInt> = (0..self.reciprocal.cols())
            .map(|_| rng.gen_bigint_range(&BigInt::zero(), &self.index))
            .collect();
        self.element(&a)
    }
}

fn ceil_log2_big(x: &BigInt) -> u64 {
    if x <= &BigInt::one() {
        0
    } else {
        (x - BigInt::one()).bits()
    }
}

/// Recovers `secret` given H₁ ⊇ secret of equal rank. The oracle is
/// simulated with exact dual samples of the preimage of `secret`.
pub fn finite_stage<R: Rng + ?Sized>(
    secret: &Lattice,
    h1: &Lattice,
    opts: &FiniteStageOptions,
    rng: &mut R,
) -> Result<FiniteStageOutcome> {
    let a6 = h1.basis();
    let l = h1.rank();
    let hp = preimage(a6, secret);
    if hp.rank() != l {
        return Err(Error::RecoveryFailed("preimage of the hidden lattice has infinite index".into()));
    }
    if l == 0 {
        return Ok(FiniteStageOutcome { lattice: h1.clone(), draws: 0, index: BigInt::one() });
    }
    let sampler = FiniteDualSampler::new(&hp)?;
    let index = sampler.index().clone();
    if index.is_one() {
        return Ok(FiniteStageOutcome { lattice: h1.clone(), draws: 0, index });
    }
    let target = 2 * ceil_log2_big(&index) + 4;
    let idx_rat = crate::exact::Rat::from_integer(index.clone());
    // Generated subgroup, scaled by the index to stay integral.
    let mut gens = IntMatrix::identity(l).scale(&index);
    let mut generated = Lattice::from_generators(&gens);
    let mut samples: Vec<Vec<crate::exact::Rat>> = Vec::new();
    let mut stable = 0;
    let mut draws = 0;
    while stable < target {
        if draws >= opts.max_draws {
            return Err(Error::BudgetExhausted(format!("dual group not stable after {draws} draws")));
        }
        draws += 1;
        let y = sampler.sample(rng);
        let scaled: Vec<BigInt> = y.iter().map(|c| (c * &idx_rat).to_integer()).collect();
        if generated.contains(&scaled) {
            stable += 1;
        } else {
            stable = 0;
            gens = gens.hcat(&IntMatrix::from_cols(l, &[scaled]).expect("length ℓ"))?;
            generated = Lattice::from_generators(&gens);
            gens = generated.basis().clone();
            samples.push(y);
        }
    }
    let g = RatMatrix::from_cols(l, &samples)?;
    let primal = dual_of_generated(&g)?;
    let lattice = Lattice::from_generators(&(a6 * &primal));
    Ok(FiniteStageOutcome { lattice, draws, index })
}
