use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph parameter n must be at least 1")]
    EmptyGraph,

    #[error("invalid rotation graph: {0}")]
    InvalidGraph(String),

    #[error(
        "max cycle length {max_len} exceeds the alpha cutoff {cap} = floor((1 - {epsilon}) * log2({vertex_count})); \
         pass an explicit unchecked cap policy to override"
    )]
    CycleCapExceeded {
        max_len: usize,
        cap: usize,
        epsilon: f64,
        vertex_count: usize,
    },

    #[error("intersection profile requested for a cycle with itself")]
    IdenticalCycles,

    #[error("cycle is not a closed simple walk in this graph: {0}")]
    CycleNotInGraph(String),

    #[error("empty turn word")]
    EmptyWord,

    #[error("invalid turn letter {0:?}; expected 'L' or 'R'")]
    InvalidLetter(char),

    #[error("Stern row step {step} exceeds the memory cap of {cap}")]
    SternStepCap { step: u32, cap: u32 },

    #[error("integer overflow in fixed-width arithmetic ({0})")]
    Overflow(&'static str),

    #[error("block size {block} is outside the supported range 1..={cap}")]
    BlockSize { block: u32, cap: u32 },

    #[error("exhaustive enumeration over length {len} exceeds cap {cap}")]
    ExhaustiveCap { len: u32, cap: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
