//! Exact lattice toolkit and classical simulators for hidden subgroup and
//! hidden shift recovery on ℤᵏ.

pub mod alga;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod lattice;
pub mod oracle;
pub mod sieve;

pub use error::{Error, Result};
