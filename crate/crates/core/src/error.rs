use thiserror::Error;

#[derive(Debug, Error)]
pub enum SloshError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid domain: {}", .0.join("; "))]
    InvalidDomain(Vec<String>),

    #[error("meshing failed: {0}")]
    Meshing(String),

    #[error("mesh invariant violated: {}", .0.join("; "))]
    Invariant(Vec<String>),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("kind mismatch: expected {expected} mesh, got {found}")]
    KindMismatch { expected: &'static str, found: &'static str },

    #[error("mesh has no free-surface edges")]
    NoFreeSurface,

    #[error("argument error: {0}")]
    Argument(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    Factorization { pivot: usize, value: f64 },

    #[error("no convergence after {iterations} iterations (last residual/estimate {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("eigensolver stalled after {iterations} iterations (Rayleigh quotient {rayleigh:e}, residual {residual:e})")]
    EigenConvergence { iterations: usize, rayleigh: f64, residual: f64 },

    #[error("interior solve failed for surface column {column}: {source}")]
    InteriorSolve {
        column: usize,
        #[source]
        source: Box<SloshError>,
    },

    #[error("eigenpair {index} residual {residual:e} exceeds {limit:e}")]
    Residual { index: usize, residual: f64, limit: f64 },

    #[error("degenerate mode: free-surface amplitude vanishes identically")]
    DegenerateMode,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SloshError>;
