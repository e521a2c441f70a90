use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),

    #[error("words must contain at least one symbol")]
    EmptyWord,

    #[error("symbol {symbol} is outside the alphabet 0..{q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },

    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("words are over different alphabets (q = {left} and q = {right})")]
    MismatchedAlphabet { left: u32, right: u32 },

    #[error("horizon {horizon} is too small, at least {required} is needed")]
    HorizonTooSmall { horizon: usize, required: usize },

    #[error("horizon {horizon} exhausted before the crossing was certified")]
    HorizonExhausted { horizon: usize },

    #[error("{what} is too large to enumerate ({detail})")]
    TooLarge { what: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invariant falsified: {0}")]
    InvariantFalsified(String),
}
