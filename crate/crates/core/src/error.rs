use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent dataset / cost file input.
    #[error("data error: {0}")]
    Data(String),

    /// Structural violation in a tree or ensemble (preorder numbering,
    /// dangling children, inconsistent class counts, ...).
    #[error("model schema error: {0}")]
    Schema(String),

    /// The model references features or classes the data does not have.
    #[error("model/data mismatch: {0}")]
    Mismatch(String),

    /// Invalid argument to an operation (negative lambda, empty grid, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// LP solver failure.
    #[error("solver error: {0}")]
    Solver(#[from] SolveError),

    /// The LP relaxation returned a non-integral optimum. The constraint
    /// matrix is totally unimodular, so every simplex vertex must be 0/1;
    /// seeing anything else signals a solver bug, not a property of the
    /// instance.
    #[error(
        "non-integral LP optimum (max deviation {max_dev:.3e} at column {col}): \
         the constraint matrix is totally unimodular so vertex solutions must be 0/1; \
         this indicates a solver bug"
    )]
    NonIntegral { max_dev: f64, col: usize },

    /// Extracted solution failed a consistency or validity audit.
    #[error("solution audit failed: {0}")]
    Audit(String),

    /// Brute-force oracle guard exceeded.
    #[error("oracle guard exceeded: {0}")]
    OracleGuard(String),

    /// Oracle disagrees with a solver result.
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    /// A trade-off curve violated a monotonicity invariant.
    #[error("curve invariant violated: {0}")]
    CurveInvariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Failures of the simplex solver itself. Infeasible/unbounded are reported
/// through `SolveStatus`, not through this type.
#[derive(Debug, Error)]
pub enum SolveError {
    /// Pivoting stalled: Dantzig pricing degenerated, the Bland fallback was
    /// engaged and the iteration cap was still exceeded.
    #[error("cycling/degeneracy: simplex stalled after {iterations} iterations (Bland fallback engaged: {bland})")]
    Stalled { iterations: usize, bland: bool },

    /// The basis matrix could not be factorized or the final solution failed
    /// its KKT residual checks even after refactorization.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
