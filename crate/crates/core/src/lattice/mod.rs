pub mod cvp;
pub mod dual;
pub mod enumerate;
pub mod lll;
pub mod sublattice;
pub mod torus;

pub use cvp::{babai, closest_dual_point, DualRounder};
pub use enumerate::{short_rank, short_vectors, successive_minima_sq};
pub use dual::{dual_membership, dual_sample_uniform, DualSampler};
pub use lll::{default_delta, is_lll_reduced, lll, lll_with_transform};
pub use sublattice::{DualDescription, Lattice};
pub use torus::TorusVec;

use num_bigint::BigInt;

/// Canonical representative of `x + L`.
pub fn coset_canonical(l: &Lattice, x: &[BigInt]) -> Vec<BigInt> {
    l.coset_canonical(x)
}
