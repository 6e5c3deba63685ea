use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
