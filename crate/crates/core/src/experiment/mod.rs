//! Seeded Monte Carlo experiments over planted instances, with JSON reports.

pub mod descriptor;
pub mod report;
pub mod runner;

pub use descriptor::{random_lattice, HspDescriptor, ScheduleOverrides, SecretSpec, ShiftDescriptor, ShiftSpec};
pub use report::{matrix_json, vector_json, ExperimentReport, TrialRecord, SCHEMA_VERSION};
pub use runner::{run_hsp, run_shift, shift_config, trial_rng, RunOptions};
