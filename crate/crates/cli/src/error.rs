use coarse_metric::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("enumeration budget of {0} elements exceeded (raise COARSE_METRIC_BUDGET)")]
    Budget(usize),

    #[error("{0}")]
    Library(Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 3 for anything the config could fix, 4 for budget, 1 otherwise.
    /// Bound violations are reported, not raised, and exit with 2.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Library(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(n) => CliError::Budget(n),
            Error::Io(msg) => CliError::Io(std::io::Error::other(msg)),
            // a bad group, generating set, sample or range all come from the config
            Error::EmptySample
            | Error::EmptyInput
            | Error::NonSymmetricGeneratingSet(_)
            | Error::NonPositiveWeight(_)
            | Error::IdentityGenerator
            | Error::NonIntegerWeights(_)
            | Error::SchemeMismatch(_)
            | Error::InsufficientRange(_)
            | Error::InvalidGroup(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::NonFinite
            | Error::SingularMatrix
            | Error::IllConditioned(_) => CliError::Config(e.to_string()),
            other => CliError::Library(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

pub type CliResult<T> = Result<T, CliError>;
