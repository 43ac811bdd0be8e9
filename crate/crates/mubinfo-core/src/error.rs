//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when constructing or combining the domain
/// types. Validation errors carry the measured residual so callers can see
/// how far an input is from satisfying the violated invariant.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension {dim} outside supported range {min}..={max}")]
    DimOutOfRange { dim: usize, min: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix shape is {rows}x{cols}, expected {dim}x{dim}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dim: usize,
    },

    #[error("not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("trace is {trace:.17} (residual {residual:.3e} exceeds {tolerance:.1e})")]
    TraceNotOne {
        trace: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{tolerance:.1e}")]
    NotPositive {
        min_eigenvalue: f64,
        tolerance: f64,
    },

    #[error("Bloch vector norm {norm:.17} exceeds 1")]
    BlochNormTooLarge { norm: f64 },

    #[error("rank {rank} outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("complete MUB set not provided for dimension {dim} (supported: 2, 3, 5, 7, 11, 13)")]
    UnsupportedMubDim { dim: usize },

    #[error("basis vectors not orthonormal: max deviation {residual:.3e} exceeds {tolerance:.1e}")]
    NotOrthonormal { residual: f64, tolerance: f64 },

    #[error("projectors do not sum to identity: residual {residual:.3e} exceeds {tolerance:.1e}")]
    IncompleteBasis { residual: f64, tolerance: f64 },

    #[error("bases not mutually unbiased: overlap deviation {residual:.3e} exceeds {tolerance:.1e}")]
    NotUnbiased { residual: f64, tolerance: f64 },

    #[error("POVM elements do not sum to identity: residual {residual:.3e} exceeds {tolerance:.1e}")]
    IncompletePovm { residual: f64, tolerance: f64 },

    #[error("probability {value:.3e} at index {index} outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("probabilities sum to {sum:.17} (residual {residual:.3e} exceeds {tolerance:.1e})")]
    ProbabilitySumNotOne {
        sum: f64,
        residual: f64,
        tolerance: f64,
    },

    #[error("malformed partition: {reason}")]
    MalformedPartition { reason: String },

    #[error("{trials} trials requested, need at least {min}")]
    TooFewTrials { trials: u64, min: u64 },

    #[error("invalid experiment config: {reason}")]
    InvalidConfig { reason: String },

    #[error("field `{field}`: {reason}")]
    SchemaViolation { field: String, reason: String },
}
