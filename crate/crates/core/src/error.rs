use thiserror::Error;

/// Errors raised by the kernels, classifiers and harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (‖A − A*‖ = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("linear system is singular")]
    Singular,

    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element must have norm 1, got {norm}")]
    NotNormalized { norm: f64 },

    #[error("element is zero; norm-one predicates do not apply")]
    ZeroElement,

    #[error("element is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("element is not a partial isometry (residual {residual:e})")]
    NotPartialIsometry { residual: f64 },

    #[error("partial isometry has no defect: 1 − x*x = 0")]
    NoDefect,

    #[error("norming set has no active block")]
    NoActiveBlock,

    #[error("identified unit is not a unitary element (residual {residual:e})")]
    InvalidUnit { residual: f64 },

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("invalid witness function: {0}")]
    InvalidWitnessFunction(String),

    #[error("witness failed numerical verification: {0}")]
    WitnessRejected(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
