//! Random cell sequences and diagrams for tests, benchmarks and the CLI.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Cell, Diagram};
use crate::error::DiagramError;
use crate::presentation::{Letter, Presentation, Word};
use crate::rewriting::{rewrite_step, Direction, Step, WordOracle};

pub fn cells_of(steps: &[Step]) -> Vec<Cell> {
    steps.iter().map(|s| Cell::new(s.position, s.relation, s.sign)).collect()
}

/// A replay-valid random walk of at most `len` cells from `top`, each step
/// chosen uniformly among all applicable relations in either direction.
/// Words longer than `max_word` are not entered.
pub fn random_cells<R: Rng>(p: &Presentation, top: &[Letter], len: usize, max_word: usize, rng: &mut R) -> Vec<Cell> {
    let mut cur = top.to_vec();
    let mut cells = Vec::with_capacity(len);
    for _ in 0..len {
        let steps: Vec<Step> =
            rewrite_step(&cur, p, Direction::Both).into_iter().filter(|s| s.result.len() <= max_word).collect();
        let Some(s) = steps.choose(rng) else { break };
        cells.push(Cell::new(s.position, s.relation, s.sign));
        cur = s.result.clone();
    }
    cells
}

/// The canonical diagram of a random walk.
pub fn random_diagram<R: Rng>(
    p: &Arc<Presentation>,
    top: &Word,
    len: usize,
    max_word: usize,
    rng: &mut R,
) -> Result<Diagram, DiagramError> {
    let cells = random_cells(p, top, len, max_word, rng);
    Diagram::from_cells(p.clone(), top.clone(), &cells)
}

/// A random `(w, w)`-diagram: a random walk followed by a derivation back to
/// `w`. Returns `None` if the oracle cannot produce the return path.
pub fn random_spherical<R: Rng>(
    oracle: &WordOracle,
    w: &Word,
    len: usize,
    max_word: usize,
    rng: &mut R,
) -> Option<Diagram> {
    let p = oracle.presentation();
    let mut cells = random_cells(p, w, len, max_word, rng);
    let end = crate::diagram::replay_cells(p, w, &cells).ok()?;
    let back = oracle.derivation(&end, w)?;
    cells.extend(cells_of(&back));
    Diagram::from_cells(p.clone(), w.clone(), &cells).ok()
}

/// A diagram built from a derivation between two words.
pub fn derivation_diagram(oracle: &WordOracle, from: &Word, to: &[Letter]) -> Option<Diagram> {
    let steps = oracle.derivation(from, to)?;
    Diagram::from_cells(oracle.presentation().clone(), from.clone(), &cells_of(&steps)).ok()
}
