//! Exact computation in diagram groups of semigroup presentations.
//!
//! A diagram group `D(P, w)` is the fundamental group of the Squier complex
//! of a semigroup presentation `P` based at a positive word `w`. This crate
//! provides presentations and rewriting, reduced diagrams with their
//! arithmetic, the Squier complex and its median structure, group-level
//! algorithms (word, conjugacy and root problems), presentations by generators
//! and relators, and folding of 2-complexes.

pub mod budget;
pub mod completion;
pub mod constructions;
pub mod diagram;
pub mod error;
pub mod folding;
pub mod group_algorithms;
pub mod group_presentation;
pub mod linalg;
pub mod presentation;
pub mod rewriting;
pub mod sampling;
pub mod script;
pub mod squier;

pub use budget::Budget;
pub use error::{DiagramError, ParseError, ParseErrorKind, PresentationError, ScriptError};
pub use presentation::{
    format_presentation, parse_presentation, shortlex, BasedPresentation, Letter, Presentation, PresentationFile,
    Relation, Sign, Word,
};
pub use rewriting::{
    check_completeness, normal_form, reduce_principal_left, rewrite_step, CompleteSystem, CompletenessReport,
    Direction, Equality, Step, WordOracle,
};
