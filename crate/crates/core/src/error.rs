use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("letter {letter} outside alphabet 1..={alphabet_size}")]
    LetterOutOfRange { letter: u32, alphabet_size: u32 },

    #[error("factor lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("similarity of empty factors is undefined")]
    EmptyFactor,

    #[error("inconsistent trace: {0}")]
    InconsistentTrace(String),

    #[error("malformed log: {0}")]
    MalformedLog(String),

    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(u32),

    #[error("image of letter {0} is empty")]
    ImageEmpty(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
