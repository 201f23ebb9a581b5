use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("guard `{guard}` exceeded: need {needed}, limit {limit}")]
    Guard {
        guard: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("category axiom violated: {0}")]
    Axiom(String),

    #[error("category is not connected")]
    Disconnected,

    #[error("poset quotient regularity violated: g = {g}, x = {x}")]
    Regularity { g: usize, x: usize },

    #[error("morse reduction failed: {0}")]
    Morse(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn guard(guard: &'static str, needed: u64, limit: u64) -> Self {
        Error::Guard {
            guard,
            needed,
            limit,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
