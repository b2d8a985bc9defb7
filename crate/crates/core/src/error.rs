use thiserror::Error;

#[derive(Debug, Error)]
pub enum CwcError {
    #[error("invalid parameters: {0}")]
    Validation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{count} candidates of {bytes_per_candidate} bytes exceed the memory limit of {limit} bytes")]
    CapacityExceeded {
        count: u128,
        bytes_per_candidate: u64,
        limit: u64,
    },

    #[error("only {available} weight-{w} words of length {n} exist, cannot pick {requested} distinct ones")]
    Infeasible {
        n: u32,
        w: u32,
        available: u128,
        requested: usize,
    },

    #[error("need at least two codewords, got {0}")]
    DegenerateInput(usize),

    #[error("invalid move on word {word}: bit {clear} must be set and bit {set} must be clear")]
    InvalidMove { word: usize, clear: u32, set: u32 },

    #[error("slice pattern {pattern:#b} over {bits} bits admits no weight-{w} word of length {n}")]
    EmptySlice {
        n: u32,
        w: u32,
        bits: u32,
        pattern: u64,
    },

    #[error("words {i} and {j} are at distance {distance}, below the minimum {d}")]
    DistanceBelowD {
        i: usize,
        j: usize,
        distance: u32,
        d: u32,
    },

    #[error("refusing to persist an invalid code: {0}")]
    Unverified(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CwcError> = std::result::Result<T, E>;
