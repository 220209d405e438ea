use alloc::string::String;

/// Errors reported by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem dimensions: {0}")]
    InvalidDims(String),

    #[error("matrix is not Hermitian (max |M - M†| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("trace is not 1 (got {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("vector {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("basis is linearly dependent or ill-conditioned (condition number {condition:e}, cap {cap:e})")]
    IllConditioned { condition: f64, cap: f64 },

    #[error("channel normalization vanishes (tr Σ⟨ĩ|ρ|ĩ⟩ = {value:e})")]
    VanishingNormalization { value: f64 },

    #[error("state is not a fixed point of the channel (residual {residual:e})")]
    NotFixedPoint { residual: f64 },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("{terms} terms exceed the basis size {dim}")]
    TooManyTerms { terms: usize, dim: usize },

    #[error("subsystem {target} is targeted by more than one channel")]
    DuplicateTarget { target: usize },

    #[error("no acceptable sample after {attempts} attempts")]
    ResampleBudgetExhausted { attempts: usize },

    #[error("{measure} needs {expected}, state has {found} subsystems")]
    Arity {
        measure: &'static str,
        expected: &'static str,
        found: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = core::result::Result<T, Error>;
