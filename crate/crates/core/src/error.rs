use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("input point set is empty")]
    EmptyInput,

    #[error("generating set is not symmetric: {0}")]
    NonSymmetricGeneratingSet(String),

    #[error("generator weight must be positive and finite: {0}")]
    NonPositiveWeight(String),

    #[error("identity element cannot be a generator")]
    IdentityGenerator,

    #[error("sphere counts need integer weights, found {0}")]
    NonIntegerWeights(String),

    #[error("generating set does not follow the graded scheme: {0}")]
    SchemeMismatch(String),

    #[error("translates failed to cover the set at index {0}")]
    UncoverableSet(u64),

    #[error("element {0} is not reachable within cost cap {1}")]
    NotGenerated(String, String),

    #[error("enumeration budget of {0} elements exceeded")]
    BudgetExceeded(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix condition estimate {0:e} exceeds 1e12")]
    IllConditioned(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} is not within the separation of any lattice point")]
    OutOfRange(String),

    #[error("no sampled pair has distance at least {0}")]
    InsufficientRange(f64),

    #[error("affine point has {found} layers, truncation is {expected}")]
    TruncationMismatch { expected: usize, found: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
