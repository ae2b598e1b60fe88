//! Error types shared by the core model and its analyses.

use thiserror::Error;

use crate::game::ValidationReport;
use crate::rat::Rat;

/// A single structural defect found by `validate_game`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Vertex has no outgoing edge.
    MissingOutEdge(usize),
    /// A (from, to) pair appears more than once.
    DuplicateEdge { from: usize, to: usize },
    /// An edge endpoint lies outside [0, n).
    BadIndex { edge: usize, from: usize, to: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingOutEdge(v) => write!(f, "vertex {v} has no outgoing edge"),
            Violation::DuplicateEdge { from, to } => {
                write!(f, "duplicate edge ({from}, {to})")
            }
            Violation::BadIndex { edge, from, to } => {
                write!(f, "edge #{edge} ({from}, {to}) references a vertex out of range")
            }
        }
    }
}

/// Errors raised by the core library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("invalid game: {0}")]
    Validation(ValidationReport),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(Rat),
    #[error("discount factor must lie strictly between 0 and 1, got {0}")]
    BadDiscount(Rat),
    #[error("policy pair does not induce a single cycle")]
    NotSingleCycle,
    #[error("pair is not certified strictly inside its cone")]
    NotCertified,
    #[error("edge ({from}, {to}) is used by the policy pair")]
    EdgeUsedByPolicy { from: usize, to: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("instance too large for brute force: {what} = {value} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        value: u128,
        limit: u128,
    },
}
