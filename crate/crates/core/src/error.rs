//! Error types shared across the crate.

use thiserror::Error;

/// Structural problems with a presentation or word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("the empty word is not a positive word")]
    EmptyWord,
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("`{0}` is not a valid letter symbol")]
    InvalidSymbol(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("relation `{0} = {0}` relates a word to itself")]
    TrivialRelation(String),
    #[error("relations `{0} = {1}` and `{1} = {0}` are both present")]
    MirroredRelation(String, String),
    #[error("presentation is not proven complete")]
    NotComplete,
    #[error("presentation has no termination proof")]
    NotTerminating,
    #[error("{0}")]
    Construction(String),
}

/// What went wrong while parsing a presentation file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `letters` line")]
    MissingLetters,
    #[error("`letters` given more than once")]
    RepeatedLetters,
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("`{0}` is not a valid letter symbol")]
    InvalidSymbol(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("expected exactly one `=` in rule")]
    MissingEquals,
    #[error("empty word in rule")]
    EmptyWord,
    #[error("rule relates a word to itself")]
    TrivialRelation,
    #[error("rule is the mirror of an earlier rule")]
    MirroredRelation,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("{0}")]
    Invalid(String),
}

/// A parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Failures of diagram construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("cell {step} does not apply: {reason}")]
    Replay { step: usize, reason: String },
    #[error("bottom of the first diagram does not match top of the second")]
    InterfaceMismatch,
    #[error("diagrams have different top words")]
    TopMismatch,
    #[error("diagram is not spherical over the expected baseword")]
    BasewordMismatch,
    #[error("diagrams live over different presentations")]
    PresentationMismatch,
    #[error("relation index {0} out of range")]
    BadRelation(usize),
    #[error("the composite word is empty")]
    EmptyWord,
    #[error("diagram has {0} cells, more than this operation supports")]
    TooLarge(usize),
}

/// Failures when parsing a diagram script.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("script column {column}: {message}")]
pub struct ScriptError {
    pub column: usize,
    pub message: String,
}
