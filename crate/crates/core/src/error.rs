use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("wrong grade: {0}")]
    Grade(String),
    #[error("matrix is not in the parabolic block pattern: {0}")]
    Membership(String),
    #[error("missing binding: {0}")]
    MissingBinding(String),
    #[error("map is not g0-equivariant: fails for {0}")]
    NotEquivariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}
