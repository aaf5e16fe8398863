use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("field order {0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("base subspace is not contained in the target column space")]
    SubspaceNotContained,

    #[error("invalid partition: {0}")]
    PartitionInvalid(String),

    #[error("expansion needs {needed} joint realizations, limit is {limit}")]
    ExpansionTooLarge { needed: u128, limit: u64 },

    #[error("operation requires exactly two users, source has {0}")]
    NotTwoUsers(usize),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("exhaustive partition search supports at most {limit} users, source has {users}")]
    TooManyUsers { users: usize, limit: usize },

    #[error("witness is not a common function: {0}")]
    WitnessInvalid(String),

    #[error("internal rank check failed: {0}")]
    InternalRank(String),
}

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::NotTwoUsers(_) | Error::UnsupportedModel(_) | Error::TooManyUsers { .. } => 4,
            Error::ExpansionTooLarge { .. } => 5,
            _ => 3,
        }
    }
}
