use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("not homogeneous in index {0}")]
    Inhomogeneous(u32),
    #[error("not a form: {0}")]
    NotAForm(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("timeout after {0} ms")]
    Timeout(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
