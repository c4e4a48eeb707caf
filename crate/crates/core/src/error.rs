//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, validators and optimizers.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched matrix/vector/table shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    Domain(String),

    /// A state, effect or distribution violating its defining constraints.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A request the solver cannot honour (enumeration too large, no
    /// feasible point found, ...).
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
