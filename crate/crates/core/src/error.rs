use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Cholesky factorization failed even after jitter escalation.
    #[error("cholesky factorization of a {n}x{n} matrix failed (jitter escalated to {jitter:e}, min diagonal {min_diag:e})")]
    Factorization { n: usize, jitter: f64, min_diag: f64 },

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("trace has no row for t = {t} (rows cover {first}..={last})")]
    TraceTooShort { t: usize, first: usize, last: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
