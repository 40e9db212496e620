use thiserror::Error;

/// Domain errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence is empty")]
    EmptySequence,

    #[error("entry {index} is not a finite number")]
    NonFinite { index: usize },

    #[error("p-norm exponent must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("event {index} is out of order or has a non-finite time")]
    UnorderedEvents { index: usize },

    #[error("threshold must be positive and finite")]
    InvalidThreshold,

    #[error("invalid signal: {0}")]
    InvalidSignal(&'static str),

    #[error("signals are sampled on different grids")]
    GridMismatch,

    #[error("input length {n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("no functional weight at event time {time}")]
    MissingWeight { time: f64 },

    #[error("weights and times differ in length ({times} vs {weights})")]
    LengthMismatch { times: usize, weights: usize },

    #[error("undefined for constant input")]
    ConstantInput,

    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },

    #[error("entry {index} is not in {{-1, 0, 1}}")]
    NotTernary { index: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
