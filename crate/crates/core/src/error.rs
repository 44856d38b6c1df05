use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("frobenius not invertible")]
    SingularFrobenius,
    #[error("unsolvable: (1 - phi) y = f has no solution (obstruction in degree {degree})")]
    Unsolvable { degree: usize },
    #[error("not positive: {0}")]
    NotPositive(String),
    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
