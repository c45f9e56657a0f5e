use thiserror::Error;

use crate::lts::StateId;

/// Errors raised while building, parsing or querying transition systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error("invalid label {0:?}: labels are nonempty and contain no whitespace or quotes")]
    InvalidLabel(String),
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("duplicate state {0}")]
    DuplicateState(StateId),
    #[error("transition label {0} is not in the alphabet")]
    LabelOutsideAlphabet(String),
    #[error("transition ({0}, {1}, {2}) is not part of the transition system")]
    ForeignTransition(StateId, String, StateId),
    #[error("formula label {0} is not in the alphabet of the transition system")]
    FormulaOutsideAlphabet(String),
    #[error("line {line}: {message}")]
    Aut { line: usize, message: String },
}

impl LtsError {
    pub(crate) fn aut(line: usize, message: impl Into<String>) -> Self {
        LtsError::Aut {
            line,
            message: message.into(),
        }
    }
}

/// A formula syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct FormulaError {
    pub position: usize,
    pub message: String,
}

/// Errors from the computation algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComputationError {
    #[error("D-lists are not size-compatible (lengths {0:?})")]
    SizeIncompatible(Vec<usize>),
    #[error("{states} states do not fit {labels} steps")]
    ShapeMismatch { states: usize, labels: usize },
}
