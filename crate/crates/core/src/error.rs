use thiserror::Error;

/// Every failure the toolkit can report. The CLI maps variants to exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// A named hypothesis of a construction does not hold.
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    /// The bijectivity criterion needs a non-wandering source.
    #[error("criterion inapplicable: {0}")]
    CriterionInapplicable(String),
    /// A search ran past a configured cap.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// An identity that must hold by construction failed (d∘d, descent, intertwining).
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 3,
            Error::CapExceeded(_) => 2,
            Error::Hypothesis(_) | Error::CriterionInapplicable(_) | Error::Invariant(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
