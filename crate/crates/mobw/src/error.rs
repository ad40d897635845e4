//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction, data handling and sampling.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument violated its domain (non-positive scale, NaN, ...).
    #[error("invalid parameter `{name}`: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A function argument was outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dataset file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A censoring scheme was inconsistent with the data it was applied to.
    #[error("censoring scheme error: {0}")]
    Scheme(String),

    /// Too few (or degenerate) observations for the requested operation.
    #[error("insufficient sample: {0}")]
    InsufficientSample(String),

    /// The shape-marginal mode could not be bracketed; the posterior is
    /// improper or the data are degenerate.
    #[error("failed to locate the shape-marginal mode: {0}")]
    ModeSearch(String),

    /// Closed-form Bayes factor requires the pooled-model hyperparameters to
    /// match the shape/scale priors of the competing-risks model.
    #[error(
        "hyperparameters violate the closed-form matching d1=c1, d2=c2, d3=b, d4=a ({0}); \
         use the numeric Bayes factor instead"
    )]
    HyperMismatch(String),

    /// Simulation replications failed at a rate that invalidates the study.
    #[error("too many failed replications: {failed} of {total}")]
    TooManyFailures { failed: usize, total: usize },

    #[error("i/o error")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Helper used by constructors that validate a positive finite parameter.
    pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(Error::InvalidParameter {
                name,
                value,
                reason: "must be finite and strictly positive",
            })
        }
    }
}
