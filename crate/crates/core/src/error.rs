use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("columns are linearly dependent")]
    DependentColumns,

    #[error("{bits}-bit input exceeds the factorization bound of {max_bits} bits")]
    FactorBound { bits: u64, max_bits: u64 },

    #[error("operation requires a lattice of positive rank")]
    ZeroRank,

    #[error("parameter ceiling exceeded: {0}")]
    ParameterCeiling(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("recovery failed: {0}")]
    RecoveryFailed(String),

    #[error("retry budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("constraint system is infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
