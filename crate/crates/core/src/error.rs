use thiserror::Error;

use crate::cosets::CosetTable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("operation requires an invariant L-presentation")]
    InvarianceRequired,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Low-index search ran out of budget; the tables found so far are kept.
    #[error("low-index search inconclusive: {reason} ({} tables found)", partial.len())]
    LowIndexInconclusive {
        reason: String,
        partial: Vec<CosetTable>,
    },

    #[error("word is not a member of the subgroup")]
    NotMember,

    #[error("endomorphism does not restrict to the subgroup: image of {0} leaves it")]
    NotInvariant(String),

    #[error("subgroup must be normal")]
    NormalityRequired,

    #[error("strategy {strategy} does not apply: {reason}")]
    StrategyInapplicable { strategy: String, reason: String },
}

impl Error {
    /// Errors caused by running out of a configured budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::ResourceLimit(_) | Error::Inconclusive(_) | Error::LowIndexInconclusive { .. }
        )
    }
}
