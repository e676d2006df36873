use thiserror::Error;

/// Errors shared by every module of the toolkit.
///
/// Precondition failures and resource guards are kept apart so that callers
/// (in particular the CLI) can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n={expected}, got n={got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bias must lie strictly inside (0,1), got {0}")]
    InvalidBias(f64),

    #[error("noise biases must satisfy 0 < q < p < 1, got q={q}, p={p}")]
    BiasOrder { q: f64, p: f64 },

    /// Exact enumeration refused because the instance is too large.
    #[error("exact mode capped at {what} <= {cap}, requested {requested}")]
    ResourceGuard {
        what: &'static str,
        cap: usize,
        requested: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} family is empty")]
    EmptyFamily(&'static str),

    #[error("family {which} is not monotone")]
    NotMonotone { which: &'static str },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
