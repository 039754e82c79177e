//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the analytical and statistical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameter tuple violates a model invariant (m ≤ 1, b0 = 0, ...).
    InvalidParams(String),
    /// A stage series does not converge for the requested collision
    /// probability (infinite stage count with gamma at or past the
    /// geometric boundary).
    DivergentSeries { gamma: f64, bound: f64 },
    /// Fixed-point solver exhausted its iteration budget. Carries the best
    /// iterate found and its residual.
    NoConvergence { best: f64, residual: f64 },
    /// Density grid cell is too wide for the smallest contention window.
    GridTooCoarse { cell_width: f64, max_allowed: f64 },
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure { context: &'static str, estimate: f64, error: f64 },
    /// Characteristic-function inversion is numerically unstable in this
    /// regime; the message suggests which limit approximation to use.
    InversionUnstable(String),
    /// Trace does not contain enough events for the requested statistic.
    InsufficientTrace(String),
    /// Statistic requested on an empty sample set.
    EmptyInput,
    /// Log-log fit quality below threshold; not a power tail over the window.
    PoorFit { r2: f64 },
    /// Series too short for the requested number of octaves.
    SeriesTooShort { len: usize, needed: usize },
    /// Order statistic index out of range for the Hill estimator.
    BadTailOrder { k: usize, n: usize },
    /// Argument outside the mathematical domain of the function.
    DomainError(String),
    /// Malformed trace CSV or sidecar.
    ParseError(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::DivergentSeries { gamma, bound } => {
                write!(f, "stage series diverges: gamma = {gamma} is not below {bound}")
            }
            Error::NoConvergence { best, residual } => {
                write!(f, "fixed point did not converge: best gamma = {best}, residual = {residual:e}")
            }
            Error::GridTooCoarse { cell_width, max_allowed } => {
                write!(f, "grid cell {cell_width} exceeds max {max_allowed} for smallest window")
            }
            Error::QuadratureFailure { context, estimate, error } => {
                write!(f, "quadrature failed in {context}: estimate {estimate:e}, error {error:e}")
            }
            Error::InversionUnstable(msg) => write!(f, "cf inversion unstable: {msg}"),
            Error::InsufficientTrace(msg) => write!(f, "insufficient trace: {msg}"),
            Error::EmptyInput => write!(f, "empty input"),
            Error::PoorFit { r2 } => write!(f, "poor power-law fit: r2 = {r2}"),
            Error::SeriesTooShort { len, needed } => {
                write!(f, "series of length {len} too short (need {needed})")
            }
            Error::BadTailOrder { k, n } => write!(f, "tail order k = {k} invalid for n = {n}"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::ParseError(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
