use num_bigint::BigUint;
use thiserror::Error;

use crate::slp::Nt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("nonterminal index {0} is out of range")]
    InvalidIndex(u32),

    #[error("expansion needs {len} letters, budget is {cap}")]
    BudgetExceeded { len: BigUint, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed grammar: {0}")]
    MalformedGrammar(String),

    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("instance violates invariants:\n{0}")]
    Invariants(String),

    #[error("letter {0} already exists; compressed letters must be fresh")]
    FreshLetterCollision(String),

    #[error("main loop exceeded {limit} iterations")]
    IterationCeiling { limit: usize },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn nt(nt: Nt) -> Self {
        Error::InvalidIndex(nt.0)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
