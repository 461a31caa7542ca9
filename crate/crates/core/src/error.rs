use thiserror::Error;

/// Error type shared by all modules.
///
/// The variants mirror the failure classes surfaced by the CLI: parameter
/// rejection and domain errors are configuration problems (exit code 2),
/// `Numeric` failures are runtime problems of the computation itself
/// (exit code 3).
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// The parameter triple `(N, s, p)` is outside the admissible range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An operation was called outside its domain (e.g. `r >= 1` for the
    /// kernel `Phi`, a ball escaping the grid box).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or produced a non-finite
    /// value; the message carries whatever partial diagnostics are available.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The operation does not support the requested configuration
    /// (e.g. the local case `s = 1` on a purely fractional path).
    #[error("unsupported: {0}")]
    Unsupported(String),
}
