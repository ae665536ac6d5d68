pub mod finite;
pub mod generic;
pub mod params;
pub mod pipeline;
pub mod recovery;
pub mod sampler;

pub use generic::{certify_generic, Genericity};
pub use finite::{finite_stage, FiniteStageOptions, FiniteStageOutcome};
pub use params::{schedule, schedule_with, AlgAParams, ScheduleOptions};
pub use pipeline::{end_to_end, EndToEndOptions, EndToEndOutcome};
pub use recovery::{recover_colattice, sample_lattice, RecoveryTrace};
pub use sampler::{sample_fourier_point, FourierSample, FourierSampler, NoiseMode};
