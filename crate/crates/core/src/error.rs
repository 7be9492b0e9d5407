use thiserror::Error;

/// Errors raised by state construction and the discord computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("hermiticity violated: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("unit trace violated: |tr M - 1| = {deviation:e}")]
    Trace { deviation: f64 },

    #[error("positivity violated: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("unitarity violated: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("eigendecomposition of a {dim}x{dim} matrix did not converge")]
    NoConvergence { dim: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("expected {expected} subsystems, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A computation produced a result that contradicts an identity it must
    /// satisfy for valid input. Never caused by bad user input alone.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate numerical corruption rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
