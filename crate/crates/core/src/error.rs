use thiserror::Error;

/// Errors raised by the solvers and their supporting numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the function is defined.
    #[error("{what}: argument {value} outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    /// The argument would overflow `exp(x^2)`.
    #[error("{what}: argument {value} exceeds the overflow guard {limit}")]
    Overflow {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    /// A parameter violated its invariant.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    /// The endpoints of a bracket do not straddle a root.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Bracket expansion ran into the overflow guard before reaching the target.
    #[error("target {target} not reached before the expansion limit {limit}")]
    Unbounded { target: f64, limit: f64 },

    /// The iteration budget ran out; the last bracket is reported.
    #[error("no convergence after {iterations} iterations, last bracket [{lo}, {hi}]")]
    Convergence { iterations: usize, lo: f64, hi: f64 },

    /// An evaluation handed to a root finder returned NaN or infinity.
    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },

    /// The shooting integrator produced a non-finite state.
    #[error("integration blew up at eta = {eta}")]
    Integration { eta: f64 },

    /// The shooting oracle could not bracket the front coefficient.
    #[error("shooting oracle failed: {0}")]
    Oracle(String),

    /// A solver failure annotated with the heat-transfer coefficient that caused it.
    #[error("gamma = {gamma}: {source}")]
    AtGamma { gamma: f64, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
