use thiserror::Error;

use crate::scenario::Group;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the function or model.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A scenario failed validation; every violated constraint is listed.
    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),

    #[error("invalid SINR threshold {0}: must be finite and > 0")]
    InvalidThreshold(f64),

    #[error("cannot split {n1} BPP nodes evenly over {k} channels")]
    InvalidChannelCount { n1: usize, k: usize },

    #[error("{function} did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    /// A truncated series still had a term above tolerance at `k_max`.
    #[error("series truncated at k_max = {k_max} with last term {last_term:e} above tolerance")]
    TruncationNotConverged { k_max: usize, last_term: f64 },

    #[error("no co-channel candidate for a target node in group {0}")]
    EmptyChannel(Group),
}

impl Error {
    /// True for failures of numerical evaluation, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::TruncationNotConverged { .. }
        )
    }
}
