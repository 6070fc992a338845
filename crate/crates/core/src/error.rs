use thiserror::Error;

/// Error type shared by every numerical kernel in the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    /// Input outside an operation's stated domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A series or subdivision budget ran out before the tolerance was met.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A zero table (or theta coverage) does not reach the requested height,
    /// or the zero-count cross-check failed.
    #[error("coverage error: {0}")]
    CoverageError(String),

    /// A bracketed root search failed to locate a sign change or converge.
    #[error("solver error: {0}")]
    SolverError(String),

    /// The denominator of a composed functional degenerated; the height is
    /// too small for the composition.
    #[error("degenerate denominator in composed functional (tau too small)")]
    DivisionDegenerate,

    /// A required constant is neither configured nor calibrated.
    #[error("missing constant: {0}")]
    MissingConstant(String),

    /// The least-squares design matrix is numerically rank deficient.
    #[error("ill-conditioned fit: condition estimate {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { cond: f64, cap: f64 },
}
