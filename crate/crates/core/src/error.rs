use thiserror::Error;

/// Errors raised by the exact braid algebra and the holonomic rewriting layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand count must be at least 1, got {0}")]
    InvalidStrands(usize),
    #[error("letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("word is not positive")]
    NotPositive,
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("images do not form a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("positive rewriting search exceeded {0} visited words")]
    SearchCap(usize),
    #[error("{what} exceeded its iteration cap of {cap}")]
    IterationCap { what: &'static str, cap: usize },
    #[error("summit set enumeration limited to {cap} strands, got {strands}")]
    StrandCap { strands: usize, cap: usize },
    #[error("not a holonomic form: {0}")]
    NotHolonomic(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl BraidError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        BraidError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors that signal an internal cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            BraidError::SearchCap(_)
                | BraidError::IterationCap { .. }
                | BraidError::StrandCap { .. }
        )
    }
}

pub type Result<T, E = BraidError> = std::result::Result<T, E>;
