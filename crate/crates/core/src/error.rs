use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{algorithm} did not converge after {sweeps} sweeps")]
    NoConvergence {
        algorithm: &'static str,
        sweeps: usize,
    },

    #[error("matrix is not symmetric: ||S - S^t||_F = {gap:e}")]
    Asymmetric { gap: f64 },

    #[error("matrix is singular to working precision (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },

    #[error("matrix is numerically singular (condition estimate {estimate:e} exceeds {limit:e})")]
    IllConditioned { estimate: f64, limit: f64 },

    #[error("Stein equation has no unique solution: {0}")]
    NoUniqueSolution(Box<Error>),

    #[error("power series diverged at term {term}")]
    Divergence { term: usize },

    #[error("operator of size {size} exceeds the analysis limit {limit}")]
    AnalysisLimit { size: usize, limit: usize },

    #[error("map does not preserve symmetric matrices: basis element {index} maps to a matrix with asymmetry {gap:e}")]
    SymmetryViolation { index: usize, gap: f64 },

    #[error("subspace mismatch: {0}")]
    SubspaceMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    /// True for failures of the numerics (as opposed to malformed input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Singular { .. }
                | Error::IllConditioned { .. }
                | Error::NoUniqueSolution(_)
                | Error::Divergence { .. }
                | Error::AnalysisLimit { .. }
                | Error::SymmetryViolation { .. }
        )
    }
}
