use thiserror::Error;

/// Errors surfaced by the construction and verification pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// No stored term of the sequence has modulus above the requested gap.
    #[error("insufficient-growth: no stored term exceeds the gap {gap}")]
    InsufficientGrowth { gap: f64 },

    /// The stored prefix of the subsequence is too short (or decays too fast)
    /// for the reciprocal tail to clear the `c3 / |mu_m|` threshold.
    #[error(
        "tail-too-thin: reciprocal tail from index {m} reaches {reached:.6e} \
         but needs more than {needed:.6e} within the stored prefix"
    )]
    TailTooThin { m: usize, needed: f64, reached: f64 },

    #[error("parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A quantity the construction guarantees came out wrong; indicates
    /// corrupted inputs rather than a user error.
    #[error("internal-inconsistency: {0}")]
    Inconsistency(String),

    #[error("construction-violation: {0}")]
    ConstructionViolation(String),

    #[error("insufficient-data: {0}")]
    InsufficientData(String),

    /// A point fell outside the domain an evaluation is defined on.
    #[error("domain: {0}")]
    Domain(String),

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input (CLI exit code 2).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parameter { .. } | Error::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
