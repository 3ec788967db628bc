use std::fmt;

use thiserror::Error;

/// Position inside a line-oriented text input (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("tuple entry {entry} \u{2265} universe {size}")]
    OutOfRange { entry: usize, size: usize },
    #[error("arity mismatch for {symbol}: expected {expected}, got {got}")]
    Arity {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("invalid symbol {0}: arity must be at least 1")]
    ZeroArity(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("expected a sentence, found free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("budget exhausted after {0} sentences")]
    BudgetExhausted(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos: Pos { line, col },
            msg: msg.into(),
        }
    }

    /// True for errors that mean "a configured limit was hit", as opposed to bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::BudgetExhausted(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
