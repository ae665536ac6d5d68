pub mod config;
pub mod engine;
pub mod measure;
pub mod phase;
pub mod target;

pub use config::{sieve_config, stage_exponent, stage_exponent_for, SieveBudgets, SieveConfig, SieveNoise};
pub use engine::{create_qubit, QubitFactory, Sieve, SieveStats};
pub use measure::{assemble_cyclic, fourier_distribution, lift_shift, recover_shift, recover_shift_with, ShiftOutcome};
pub use phase::{lift_mod, PhaseQubit, PhaseVector, Spot};
pub use target::{build_target_group, check_target_group, torsion_exponent, torus_order, CyclicFactor, FactorPart, TargetGroup};
