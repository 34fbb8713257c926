use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),

    /// Density collapsed to a near-delta distribution; the Gaussian-fit force
    /// scales as σ⁻⁴ and would overflow.
    #[error("degenerate density: variance {var:e} below threshold {threshold:e}")]
    DegenerateDensity { var: f64, threshold: f64 },

    #[error("density has no positive mass")]
    ZeroMass,

    #[error("tridiagonal system is singular at row {0}")]
    SingularSystem(usize),

    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
}
