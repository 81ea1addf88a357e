use thiserror::Error;

/// Errors raised by the game model, solvers and learning rule.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("{kind} index {index} out of range (size {size})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        size: usize,
    },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("contract violation: {0}")]
    Contract(String),

    /// Bayes normalizer vanished: the prior gives zero mass to every state
    /// that could have produced the observed signal.
    #[error("degenerate belief update on dish {dish}: signal {signal} has zero predictive probability")]
    DegenerateUpdate { dish: usize, signal: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("not a homogeneous game: {0}")]
    NotHomogeneous(String),
}

impl GameError {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        GameError::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;

pub(crate) fn check_index(kind: &'static str, index: usize, size: usize) -> Result<()> {
    if index < size {
        Ok(())
    } else {
        Err(GameError::IndexOutOfRange { kind, index, size })
    }
}
