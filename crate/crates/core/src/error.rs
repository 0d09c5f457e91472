use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("incompatible elements: {0}")]
    IncompatibleElement(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource cap of {cap} candidates exceeded; computation incomplete")]
    ResourceCap { cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("incompatible rings: sqrt(-{0}) and sqrt(-{1})")]
    IncompatibleRing(i64, i64),
    #[error("zero or unit where a nonzero nonunit is required: {0}")]
    ZeroOrUnit(String),
    #[error("parse error: {0}")]
    Parse(String),
}
