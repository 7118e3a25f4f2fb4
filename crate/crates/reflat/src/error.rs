use thiserror::Error;

/// Errors shared by all polytope, weight-system and database operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not full-dimensional")]
    DegenerateInput,
    #[error("the origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not an IP polytope with interior point 0")]
    NotIP,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("point set is not a simplex")]
    NotSimplex,
    #[error("polytope is not IP-confined")]
    NotIPConfined,
    #[error("weight system has no monomial solutions")]
    EmptyNewton,
    #[error("invalid weight system: {0}")]
    InvalidWeight(String),
    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),
    #[error("sample size {requested} exceeds database size {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("corrupt database: {0}")]
    CorruptDatabase(String),
    #[error("database version {found} does not match expected {expected}")]
    VersionMismatch { found: u8, expected: u8 },
    #[error("database dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
