use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time {0} outside the admissible range")]
    TimeOutOfRange(f64),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("instance too large for brute force: {0}")]
    TooLarge(String),

    #[error("sequence too short: need {needed} terms, have {have}")]
    SequenceTooShort { needed: usize, have: usize },

    #[error("invalid chooser policy: {0}")]
    InvalidPolicy(String),

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("kernel `{kernel}` failed: {reason}")]
    Sampler { kernel: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
