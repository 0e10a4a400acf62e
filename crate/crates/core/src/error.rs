use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate {value} at index {index}")]
    NonFiniteCoordinate { index: usize, value: f64 },

    #[error("non-finite fitness {value} at iteration {iteration}")]
    NonFiniteFitness { iteration: usize, value: f64 },

    #[error("unknown problem `{query}`; valid identifiers are 1..=26 or one of: {valid}")]
    UnknownProblem { query: String, valid: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("budget violation: pair {pop}:{iters} has product {product}, expected {budget}")]
    Budget {
        pop: usize,
        iters: usize,
        product: u128,
        budget: u128,
    },

    #[error("contract violation: {0}")]
    Contract(String),
}
