use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid type descriptor: {0}")]
    InvalidType(String),

    #[error("group too large: {what} is {size}, budget is {budget}")]
    RankOverflow {
        what: &'static str,
        size: u128,
        budget: u64,
    },

    #[error("simple reflection index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("oracle budget exceeded: {needed} subwords, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("elements are not Bruhat comparable: y = [{y}] is not below x = [{x}]")]
    NotComparable { x: String, y: String },

    #[error("lifting property violated: {0}")]
    LiftingViolation(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cache file belongs to system {found}, expected {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
