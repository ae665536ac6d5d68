use num_bigint::BigInt;
use num_traits::Zero;

use super::lll::{default_delta, gram_schmidt, lll};
use super::sublattice::Lattice;
use super::torus::TorusVec;
use crate::exact::matrix::RatMatrix;
use crate::exact::rational::{rat_dot, round_half_up, Rat};

/// Babai nearest-plane rounding against a (preferably reduced) basis.
/// Returns integer coefficients `c` with `B·c` close to `target`.
pub fn babai(basis: &RatMatrix, target: &[Rat]) -> Vec<BigInt> {
    let (star, _) = gram_schmidt(basis);
    let cols = basis.columns();
    let mut t = target.to_vec();
    let mut coef = vec![BigInt::zero(); cols.len()];
    for j in (0..cols.len()).rev() {
        let nn = rat_dot(&star[j], &star[j]);
        if nn.is_zero() {
            continue;
        }
        let c = round_half_up(&(rat_dot(&t, &star[j]) / nn));
        let cr = Rat::from_integer(c.clone());
        for (x, b) in t.iter_mut().zip(&cols[j]) {
            *x -= &cr * b;
        }
        coef[j] = c;
    }
    coef
}

/// Rounds torus points to nearby points of H^#, with the projections and the
/// reduced H^∘ basis computed once.
#[derive(Clone, Debug)]
pub struct DualRounder {
    basis_t: RatMatrix,
    reciprocal: RatMatrix,
    reduced: RatMatrix,
}

impl DualRounder {
    pub fn new(l: &Lattice) -> DualRounder {
        let reciprocal = l.reciprocal_basis().unwrap_or_else(|_| RatMatrix::zeros(l.k(), 0));
        let reduced = if reciprocal.cols() == 0 {
            reciprocal.clone()
        } else {
            lll(&reciprocal, &default_delta()).expect("reciprocal columns are independent")
        };
        DualRounder { basis_t: l.basis().to_rat().transpose(), reciprocal, reduced }
    }

    /// Splits lift(y) into its H_ℝ^⊥ part, kept exactly, and its H_ℝ part,
    /// rounded to H^∘ by Babai.
    pub fn round(&self, y: &TorusVec) -> TorusVec {
        if self.reciprocal.cols() == 0 {
            return y.clone();
        }
        let lift = y.lift();
        // P_H·y = M(MᵀM)⁻¹Mᵀy.
        let proj = self.reciprocal.mul_vec(&self.basis_t.mul_vec(&lift));
        let c = babai(&self.reduced, &proj);
        let cr: Vec<Rat> = c.into_iter().map(Rat::from_integer).collect();
        let h = self.reduced.mul_vec(&cr);
        TorusVec::new(lift.iter().zip(&proj).zip(&h).map(|((y, p), h)| y - p + h))
    }
}

/// A point of H^# near `y`: exact projection onto H_ℝ^⊥ plus Babai rounding in H_ℝ.
pub fn closest_dual_point(l: &Lattice, y: &TorusVec) -> TorusVec {
    DualRounder::new(l).round(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::lattice::dual::dual_membership;

    #[test]
    fn examples() {
        let two = Lattice::from_columns(1, &[vec![2]]);
        assert_eq!(closest_dual_point(&two, &TorusVec::new([rat(49, 100)])), TorusVec::new([rat(1, 2)]));
        let y = TorusVec::new([rat(1, 2)]);
        assert_eq!(closest_dual_point(&two, &y), y);
        let z = Lattice::full(2);
        let y = TorusVec::new([rat(2, 5), rat(-3, 7)]);
        assert!(closest_dual_point(&z, &y).is_zero());
    }

    #[test]
    fn rank_deficient_output_is_member() {
        let l = Lattice::from_columns(3, &[vec![3, 1, 0], vec![0, 2, 5]]);
        let y = TorusVec::new([rat(1, 7), rat(2, 9), rat(5, 11)]);
        assert!(dual_membership(&l, &closest_dual_point(&l, &y)));
    }

    #[test]
    fn babai_on_identity_rounds() {
        let c = babai(&RatMatrix::identity(2), &[rat(7, 5), rat(-8, 5)]);
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
