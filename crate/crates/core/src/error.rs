use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid tolerance: eps_abs={eps_abs:e}, eps_rel={eps_rel:e} (both must lie in (0, 1e-3])")]
    InvalidTolerance { eps_abs: f64, eps_rel: f64 },

    #[error("index {index} out of range for {len} points")]
    Index { index: usize, len: usize },

    #[error("median identities fail by {deviation:e} (not a tree metric on this triple)")]
    Median { deviation: f64 },

    #[error("operation `{operation}` is not defined for metric {metric}")]
    Unsupported { operation: &'static str, metric: String },

    #[error("invalid metric parameter: {0}")]
    InvalidMetric(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("matrix is not positive semidefinite: pivot {pivot:e} at index {index}")]
    NotPsd { index: usize, pivot: f64 },

    #[error("point set is not labelled: {0}")]
    NotLabelled(String),

    #[error("point set is not ordered at position {0}")]
    NotOrdered(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
