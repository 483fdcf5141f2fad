use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: must be even and at least 4")]
    InvalidGrid(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid structure: {what} residual {residual:.3e} exceeds {tol:.1e}")]
    InvalidStructure { what: &'static str, residual: f64, tol: f64 },

    #[error("degenerate adapted frame at node {0}")]
    DegenerateFrame(usize),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: String, found: usize },

    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("form carries no bidegree tag")]
    MissingBidegree,

    #[error("input is not self-dual: residual {0:.3e}")]
    NotSelfDual(f64),

    #[error("ambiguous null space for {what}: gap ratio {gap:.3e} below {required}")]
    AmbiguousNullspace { what: String, gap: f64, required: f64 },

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { solver: &'static str, iterations: usize, residual: f64 },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
