use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dense computation limited to {max} qubits, got {n}")]
    DenseLimit { n: usize, max: usize },

    #[error("kernel value {0} outside [0, 1] beyond rounding tolerance")]
    KernelOutOfRange(f64),

    #[error("labels contain a single class; the dual equality constraint forces a degenerate model")]
    SingleClass,

    #[error("degenerate model: {0}")]
    Degenerate(String),

    #[error("solver did not converge within {iterations} pair updates (violation {violation:e})")]
    NotConverged { iterations: u64, violation: f64 },

    #[error("row {row}, column {column}: {message}")]
    Csv {
        row: usize,
        column: String,
        message: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used for machine-parsable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension",
            Error::NonFinite(_) => "non-finite",
            Error::InvalidParameter(_) => "parameter",
            Error::DenseLimit { .. } => "dense-limit",
            Error::KernelOutOfRange(_) => "kernel-range",
            Error::SingleClass => "single-class",
            Error::Degenerate(_) => "degenerate",
            Error::NotConverged { .. } => "not-converged",
            Error::Csv { .. } => "csv",
            Error::Parse(_) => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
