use thiserror::Error;

/// Errors raised by grids, bodies, Orlicz functions, functionals and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Unsupported parameter combination or malformed construction input.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A value left the admissible numeric domain at a quadrature node.
    #[error("numerical domain error at node {node}: {detail}")]
    NumericalDomain { node: usize, detail: String },

    /// A numeric failure not attached to a grid node (overflow, non-finite input).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A body violates the star-body conditions (positive, finite radial function).
    #[error("invalid body: {0}")]
    InvalidBody(String),

    /// The inner function of a composition is not invertible on the probe range.
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    /// The body representation does not support the requested functional.
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    /// A documented precondition of an operation was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The optimizer never produced a finite objective value.
    #[error("optimization failure: {0}")]
    OptimizationFailure(String),

    /// Expression text could not be parsed.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
