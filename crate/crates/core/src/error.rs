use thiserror::Error;

/// Errors raised by the group, field and harness machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("field of order {p}^{f} exceeds the arithmetic ceiling of 2^32")]
    FieldTooLarge { p: u64, f: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("no discrete-log table for a field of order {0}")]
    NoLogTable(u64),
    #[error("enumeration cap {cap} exceeded ({reached} elements reached)")]
    CapExceeded { cap: usize, reached: usize },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("group has not been enumerated")]
    NotEnumerated,
    #[error("invalid block system: {0}")]
    InvalidBlocks(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("order check failed: expected {expected}, got {got}")]
    OrderMismatch { expected: u64, got: u64 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
