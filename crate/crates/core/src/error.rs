//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value falls outside the range a structure was built for.
    #[error("{name} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    /// The requested computation exceeds the work or memory budget.
    /// The message names a cheaper alternative when one exists.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Exhaustive search found no coprime pair for block (i, j).
    #[error("no coprime pair exists for block (i = {i}, j = {j})")]
    NoCoprimePair { i: u64, j: u64 },
}
