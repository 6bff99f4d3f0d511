use std::fmt;

use thiserror::Error;

/// Location-aware parse failure.
///
/// `item` is the zero-based index of the token (or line, for file formats)
/// and `column` the zero-based character offset inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub item: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(item: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            item,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "item {}, column {}: {}",
            self.item, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("form degree {degree} is not supported here")]
    UnsupportedDegree { degree: usize },

    #[error("wedge product of degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("subspace is not a subalgebra")]
    NotSubalgebra,

    #[error("form is not symplectic: {0}")]
    NotSymplectic(String),

    #[error("metric is degenerate")]
    DegenerateMetric,

    #[error("invalid bi-Lagrangian structure: {0}")]
    InvalidStructure(String),

    #[error("antisymmetric matrix of odd size {0} has no Pfaffian")]
    OddDimension(usize),

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("unknown catalog entry `{name}`{}", suggestion_suffix(.suggestion))]
    UnknownEntry {
        name: String,
        suggestion: Option<String>,
    },

    #[error("unknown lemma identity `{0}`")]
    UnknownLemma(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn suggestion_suffix(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean `{s}`?)"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
