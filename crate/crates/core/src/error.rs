use thiserror::Error;

/// Largest dimension accepted by routines that materialize `2^n`-sized objects.
pub const MAX_DIMENSION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard exceeded: {what} requires n <= {limit}, got n = {n}")]
    SizeGuard { what: &'static str, n: usize, limit: usize },

    #[error("moment entry for subset mask {mask:#b} is above stored level {level}")]
    LevelTooLow { mask: u32, level: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("eigensolver did not converge on a {dim} x {dim} matrix")]
    EigenFailure { dim: usize },

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeGuard { what, n, limit })
    } else {
        Ok(())
    }
}
