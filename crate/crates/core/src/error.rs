use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An operation received an empty input it cannot work with.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("candidate pool exhausted")]
    PoolExhausted,

    #[error("Sobol dimension {requested} exceeds the embedded table capacity of {capacity}")]
    SobolDimension { requested: usize, capacity: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("aggregation error: {0}")]
    ShapeMismatch(String),
}
