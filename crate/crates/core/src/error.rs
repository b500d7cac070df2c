use thiserror::Error;

use crate::game::IllegalMove;
use crate::graph::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size: n must be at least 1")]
    InvalidSize,

    #[error("unknown vertex label {0}")]
    UnknownLabel(Label),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("instance too large for {what}: {actual} exceeds limit {limit}")]
    Oversized {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("illegal move: {0}")]
    IllegalMove(#[from] IllegalMove),

    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),

    #[error("opening {0} is essential; no first-player plan exists")]
    EssentialOpening(Label),

    #[error("opening {0} is inessential; refusing a losing second-player plan")]
    InessentialOpening(Label),

    #[error("game is already over")]
    GameOver,

    #[error("engine invariant broken: {0}")]
    BrokenInvariant(String),
}

impl Error {
    /// Whether this error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::BrokenInvariant(_))
    }
}
