use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("graded piece is infinite-dimensional; supply an exponent bound")]
    UnboundedPiece,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("class identification failed: {0}")]
    Identification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("check failed: {0}")]
    Check(String),
}
