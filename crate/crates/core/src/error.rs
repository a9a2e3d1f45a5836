use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside the domain of the (real or complex) Gauss map.
    #[error("input outside Gauss map domain: {0}")]
    OutOfDomain(String),

    /// An operation that needs at least one digit got an empty sequence.
    #[error("empty digit sequence")]
    EmptyDigits,

    /// A digit violated the positivity / attainability requirement.
    #[error("invalid digit: {0}")]
    InvalidDigit(String),

    /// Bottom-up evaluation of a digit sequence hit a zero denominator.
    #[error("inadmissible digit sequence: zero denominator during evaluation")]
    ZeroDenominator,

    /// Expansion exceeded the termination guard; indicates a bug or an
    /// input outside the supported domain.
    #[error("expansion did not terminate within {0} steps")]
    ExpansionGuard(usize),

    /// Eigenvalue iteration failed to converge.
    #[error("eigenvalue iteration did not converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Bisection could not bracket a root.
    #[error("bracket failure: {0}")]
    BracketFailure(String),

    /// A count table was asked about a range it does not cover.
    #[error("count table covers n <= {limit}, requested {requested}")]
    TableCoverage { limit: u64, requested: u64 },

    /// Thickened window degenerates (floor(N*eps) >= N) or gamma invalid.
    #[error("invalid thickening window: {0}")]
    BadWindow(String),

    /// Too few samples (or no positive samples) for a regression.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed textual input (CLI literals, CSV, config files).
    #[error("parse error: {0}")]
    Parse(String),

    /// Parameter validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
