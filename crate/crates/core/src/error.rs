use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix must have dimension at least 1")]
    Empty,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("input is not Hermitian: max |H_ij - conj(H_ji)| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NonHermitianInput { deviation: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("state vector has zero norm")]
    ZeroState,

    #[error("fill vector has {found} entries but B has {expected} distinct eigenvalues")]
    FillLengthMismatch { expected: usize, found: usize },

    #[error(
        "grid [{x_min}, {x_max}] is too narrow; need at least [{required_min}, {required_max}] with n_points >= 16"
    )]
    GridTooNarrow {
        x_min: f64,
        x_max: f64,
        required_min: f64,
        required_max: f64,
    },

    #[error("grid moments not converged: relative change {relative_change:.3e} exceeds {tolerance:.3e}")]
    NotConverged {
        relative_change: f64,
        tolerance: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
