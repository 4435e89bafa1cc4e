use std::fmt;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("malformed input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{what} exceeds cap ({actual} > {cap})")]
    CapExceeded { what: Limit, cap: usize, actual: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which configurable size limit was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    MonoidSize,
    BlockAlphabet,
    MaskStates,
    EnumerationBudget,
    CascadeStates,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Limit::MonoidSize => "monoid size",
            Limit::BlockAlphabet => "block alphabet size",
            Limit::MaskStates => "mask automaton states",
            Limit::EnumerationBudget => "enumeration budget",
            Limit::CascadeStates => "cascade product states",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap_check(what: Limit, cap: usize, actual: usize) -> Result<()> {
    if actual > cap {
        Err(Error::CapExceeded { what, cap, actual })
    } else {
        Ok(())
    }
}
