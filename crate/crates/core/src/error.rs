use thiserror::Error;

/// Errors raised by the constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("cell ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    CellOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate cell ({row}, {col})")]
    DuplicateCell { row: usize, col: usize },

    #[error("expected a permutation matrix (one 1 per row and per column)")]
    NotPermutationMatrix,

    #[error("cannot trim {a}+{b} columns from a pattern with {cols} columns")]
    TrimTooWide { a: usize, b: usize, cols: usize },

    #[error("pattern has no 1s")]
    EmptyPattern,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("no {pattern}-avoiding sample after {tries} tries at n = {n}")]
    RejectionExhausted {
        pattern: String,
        n: usize,
        tries: usize,
    },

    #[error("join precondition violated: {0}")]
    CornerMissing(&'static str),

    #[error("blocked sequence length mismatch: {0}")]
    LengthMismatch(String),

    #[error("predicted size {predicted} exceeds budget {budget}")]
    BudgetExceeded { predicted: String, budget: u64 },

    #[error("construction does not match its recurrences: {0}")]
    ConstructionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
