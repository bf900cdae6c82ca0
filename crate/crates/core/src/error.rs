use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is out of range or violates a constructor precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exhaustive sweep needs {needed} evaluations, budget is {budget}; use sampled mode")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("the 3-algebra has a nonzero center of real dimension {}", basis.len())]
    NonzeroCenter { basis: Vec<Vec<crate::Scalar>> },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
