use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two points to exchange coincide, so the exchange axis is undefined.
    #[error("degenerate geometry: points are {distance:e} apart (minimum {tolerance:e})")]
    DegenerateGeometry { distance: f64, tolerance: f64 },

    /// The exchange relation only applies to identical quantum-number sets.
    #[error("identical-set violation: {0}")]
    IdenticalSetViolation(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix dimension {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    #[error("report encoding failed: {0}")]
    Report(String),
}
