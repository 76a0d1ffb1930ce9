//! Explicit resource caps for searches that may not terminate on their own.

use serde::Serialize;

/// Caps on enumeration work. Every budget-bounded search reports `Unknown`
/// (or a truncation flag) instead of running past these limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximum number of words enumerated in a single class or search.
    pub max_words: usize,
    /// Maximum number of rewrite steps in a single normalization.
    pub max_steps: usize,
    /// Maximum number of diagrams held in a shift-closure or ball frontier.
    pub max_frontier: usize,
    /// Maximum length of candidate witness words in existence searches.
    pub max_witness_len: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_words: 10_000, max_steps: 100_000, max_frontier: 10_000, max_witness_len: 4 }
    }
}

impl Budget {
    pub fn small() -> Budget {
        Budget { max_words: 500, max_steps: 5_000, max_frontier: 500, max_witness_len: 3 }
    }
}
