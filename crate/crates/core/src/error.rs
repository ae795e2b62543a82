use thiserror::Error;

/// Errors produced anywhere in the mining pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty database: a relative support threshold needs at least one transaction")]
    EmptyDatabase,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("diffset of size {diff_size} exceeds parent support {parent_support}")]
    InconsistentDiffset { parent_support: u32, diff_size: u32 },

    #[error("oracle refused: {frequent_items} frequent items exceeds the limit of {limit}")]
    OracleLimit { frequent_items: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
