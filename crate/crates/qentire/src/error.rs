use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps these onto its exit-code convention: parameter/domain
/// problems exit 2, numerical guard failures exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parse failure for a numeric literal or structured argument.
    #[error("parse error: {0}")]
    Parse(String),

    /// A series whose certified term-ratio bound never drops below 1
    /// within the configured truncation cap.
    #[error("series did not converge: {0}")]
    NonConvergence(String),

    /// Simultaneous root iteration missed its convergence target.
    #[error("root finding did not converge after {sweeps} sweeps (worst correction {worst})")]
    RootNonConvergence { sweeps: usize, worst: String },

    /// A runtime safety check (Rouché-style separation, stability under
    /// truncation growth, ...) failed; raising precision or the
    /// truncation degree usually resolves it.
    #[error("numerical guard failed: {0}")]
    Guard(String),

    /// Two independent certification routes disagree — typically a sign
    /// of precision exhaustion rather than a mathematical failure.
    #[error("certification inconsistency: {0}")]
    Inconsistent(String),

    /// A combinatorial budget (minor enumeration, ...) was exceeded.
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    /// Sequence lengths passed to an elementwise transform disagree.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
