use thiserror::Error;

/// Errors raised by the numerical kernels and channel constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation of U^dag U from I is {0:e})")]
    NotUnitary(f64),

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("vector is not normalized (norm {0})")]
    NotUnitVector(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("{name} = {value} is outside the admissible range [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("Kraus operators are not trace preserving (residual {residual:e} > {tol:e})")]
    InvalidChannel { residual: f64, tol: f64 },

    #[error("channel needs at least one Kraus operator and dimension >= 2")]
    EmptyChannel,

    #[error("entanglement fidelity is zero; the optimal weight vector is undefined")]
    ZeroFidelity,

    #[error("unsupported dimension {0} for this operation")]
    UnsupportedDimension(usize),

    #[error("time must be positive (got {0})")]
    NonPositiveTime(f64),

    #[error("invalid energy interval: e_max = {e_max}, e_min = {e_min}")]
    BadInterval { e_max: f64, e_min: f64 },

    #[error("fidelity {0} is outside [0, 1]")]
    FidelityOutOfRange(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
