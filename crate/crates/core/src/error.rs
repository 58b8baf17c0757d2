use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("item id {id} is out of range for a dataset of {len} items")]
    InvalidItem { id: usize, len: usize },

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),

    #[error("stale extension: factor of order {expected} (generation {generation}) was modified after the marginal was computed")]
    StaleExtension { expected: usize, generation: u64 },

    #[error("exhaustive search over {count} subsets exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
