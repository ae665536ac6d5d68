use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use super::sublattice::Lattice;
use super::torus::TorusVec;
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::exact::rational::Rat;

/// True iff Mᵀ·lift(y) is integral, i.e. y ∈ H^#.
pub fn dual_membership(l: &Lattice, y: &TorusVec) -> bool {
    assert_eq!(l.k(), y.dim(), "dimension mismatch");
    let lift = y.lift();
    l.basis().columns().iter().all(|col| {
        col.iter()
            .zip(&lift)
            .fold(Rat::zero(), |acc, (m, c)| acc + Rat::from_integer(m.clone()) * c)
            .is_integer()
    })
}

/// Draws exactly uniform points of the finite component group of H^#, plus a
/// uniform point of the grid-(1/Q) approximation of its identity torus.
#[derive(Clone, Debug)]
pub struct DualSampler {
    k: usize,
    reciprocal: RatMatrix,
    ortho: IntMatrix,
    delta: BigInt,
    grid: BigInt,
}

impl DualSampler {
    pub fn new(l: &Lattice, grid: &BigInt) -> DualSampler {
        assert!(grid >= &BigInt::from(1), "grid must be positive");
        DualSampler {
            k: l.k(),
            reciprocal: l.reciprocal_basis().unwrap_or_else(|_| RatMatrix::zeros(l.k(), 0)),
            ortho: l.integer_orthogonal(),
            delta: l.gram_det().clone(),
            grid: grid.clone(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TorusVec {
        self.sample_parts(rng).0
    }

    /// A sample together with the numerators u of its torus part N·u/Q.
    pub fn sample_parts<R: Rng + ?Sized>(&self, rng: &mut R) -> (TorusVec, Vec<BigInt>) {
        let mut acc = vec![Rat::zero(); self.k];
        for j in 0..self.reciprocal.cols() {
            let a = Rat::from_integer(rng.gen_bigint_range(&BigInt::zero(), &self.delta));
            for (i, x) in acc.iter_mut().enumerate() {
                *x += self.reciprocal.get(i, j) * &a;
            }
        }
        let mut nums = Vec::with_capacity(self.ortho.cols());
        for j in 0..self.ortho.cols() {
            let n = rng.gen_bigint_range(&BigInt::zero(), &self.grid);
            let u = Rat::new(n.clone(), self.grid.clone());
            nums.push(n);
            for (i, x) in acc.iter_mut().enumerate() {
                *x += Rat::from_integer(self.ortho.get(i, j).clone()) * &u;
            }
        }
        (TorusVec::new(acc), nums)
    }
}

/// One uniform sample of H^# on the grid (1/q_t)ℤ for the torus part.
pub fn dual_sample_uniform<R: Rng + ?Sized>(l: &Lattice, q_t: &BigInt, rng: &mut R) -> TorusVec {
    DualSampler::new(l, q_t).sample(rng)
}
