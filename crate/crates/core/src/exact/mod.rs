pub mod contfrac;
pub mod factor;
pub mod matrix;
pub mod normal_form;
pub mod partial;
pub mod rational;

pub use contfrac::{continued_fraction_convergents, legendre_reconstruct, Reconstruction};
pub use factor::{extended_gcd, factor, factor_with_bound};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use normal_form::{hnf, hnf_basis, rcef, snf, snf_rational};
pub use partial::{partial_fractions, PartialFractionForm, PfTerm};
pub use rational::Rat;
