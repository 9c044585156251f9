use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its physical range.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The internal gain is at or above the parametric-oscillation threshold.
    #[error("internal gain {gain} is at or above threshold {threshold}")]
    Threshold { gain: f64, threshold: f64 },

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// A root or minimum could not be bracketed.
    #[error("bracket search failed: {0}")]
    Bracket(String),
}
