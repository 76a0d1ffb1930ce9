//! Presentations of diagram groups over complete presentations by principal
//! left edges, and the retract embedding of an arbitrary presentation into a
//! complete one.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::completion::{replay_moves, reverse, shift, Move};
use crate::diagram::{Cell, Diagram};
use crate::error::{DiagramError, PresentationError};
use crate::linalg::rank;
use crate::presentation::{shortlex, Letter, Presentation, Sign, Word};
use crate::rewriting::{principal_left_step, rewrite_step, CompleteSystem, Direction, Equality, WordOracle};

/// An oriented edge `(u, ℓ → r, v)` of the Squier complex; `relation`
/// indexes a rule `ℓ → r` of the complete system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeTriple {
    #[serde(skip)]
    pub u: Vec<Letter>,
    pub relation: usize,
    #[serde(skip)]
    pub v: Vec<Letter>,
}

impl EdgeTriple {
    pub fn word(&self, p: &Presentation) -> Vec<Letter> {
        let mut w = self.u.clone();
        w.extend_from_slice(&p.relation(self.relation).left);
        w.extend_from_slice(&self.v);
        w
    }

    pub fn render(&self, p: &Presentation) -> String {
        let r = p.relation(self.relation);
        format!("({} | {}>{} | {})", p.render(&self.u), p.render(&r.left), p.render(&r.right), p.render(&self.v))
    }
}

/// Whether the edge is the canonical reduction step of `uℓv`.
pub fn is_principal_left_edge(edge: &EdgeTriple, sys: &CompleteSystem) -> bool {
    let p = sys.presentation();
    match principal_left_step(&edge.word(p), p) {
        Some(s) => s.position == edge.u.len() && s.relation == edge.relation,
        None => false,
    }
}

/// `lhs = rhs ^ conjugator`, with `None` standing for the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relator {
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
    pub conjugator: Option<usize>,
}

impl Relator {
    fn is_trivial(&self) -> bool {
        match (self.lhs, self.rhs) {
            (None, None) => true,
            (a, b) => a == b && self.conjugator.is_none(),
        }
    }

    pub fn render(&self) -> String {
        let g = |x: Option<usize>| x.map(|i| format!("g{i}")).unwrap_or_else(|| "1".into());
        match self.conjugator {
            Some(c) => format!("{} = {} ^ g{c}", g(self.lhs), g(self.rhs)),
            None => format!("{} = {}", g(self.lhs), g(self.rhs)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupPresentation {
    /// The complete rewriting system the triples refer to.
    #[serde(skip)]
    pub system: Arc<Presentation>,
    /// Whether the system is the ShortLex reorientation of the input.
    pub reoriented: bool,
    pub generators: Vec<EdgeTriple>,
    pub relators: Vec<Relator>,
    /// Set when the class of the baseword was cut at the length bound or budget.
    pub truncated: bool,
}

impl GroupPresentation {
    /// Rank of the abelianisation of the listed presentation.
    pub fn abelianization_rank(&self) -> usize {
        let n = self.generators.len();
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; n];
                if let Some(a) = r.lhs {
                    row[a] += 1;
                }
                if let Some(b) = r.rhs {
                    row[b] -= 1;
                }
                row
            })
            .collect();
        n - rank(&rows)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let _ = writeln!(out, "gen {}", g.render(&self.system));
        }
        for r in &self.relators {
            let _ = writeln!(out, "{}", r.render());
        }
        out
    }
}

/// The complete system to read generators from: `p` itself or its ShortLex
/// reorientation (which has the same diagram groups).
fn complete_orientation(p: &Presentation, budget: &Budget) -> Result<(CompleteSystem, bool), PresentationError> {
    if let Ok(sys) = CompleteSystem::new(Arc::new(p.clone()), budget) {
        return Ok((sys, false));
    }
    CompleteSystem::new(Arc::new(p.shortlex_oriented()), budget)
        .map(|s| (s, true))
        .map_err(|_| PresentationError::NotComplete)
}

/// Words of `[w]` of length at most `max_len`, in ShortLex order, and
/// whether longer words (or the budget) cut the enumeration.
fn bounded_class(w: &[Letter], p: &Presentation, max_len: usize, budget: &Budget) -> (Vec<Vec<Letter>>, bool) {
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([w.to_vec()]);
    let mut order = vec![w.to_vec()];
    let mut head = 0;
    let mut cut = false;
    while head < order.len() {
        let cur = order[head].clone();
        head += 1;
        for s in rewrite_step(&cur, p, Direction::Both) {
            if s.result.len() > max_len {
                cut = true;
                continue;
            }
            if seen.contains(&s.result) {
                continue;
            }
            if order.len() >= budget.max_words {
                cut = true;
                continue;
            }
            seen.insert(s.result.clone());
            order.push(s.result);
        }
    }
    order.sort_by(|a, b| shortlex(a, b));
    (order, cut)
}

/// Generators and relators of `D(P, w)` from the words of `[w]` of length at
/// most `max_len`. Relators mentioning edges outside that range are dropped,
/// so longer bounds extend the output by a suffix.
pub fn generate_presentation(
    p: &Presentation,
    w: &[Letter],
    max_len: usize,
    budget: &Budget,
) -> Result<GroupPresentation, PresentationError> {
    let (sys, reoriented) = complete_orientation(p, budget)?;
    let sp = sys.presentation().clone();
    let (words, mut truncated) = bounded_class(w, &sp, max_len.max(w.len()), budget);

    let mut generators = Vec::new();
    let mut index: HashMap<EdgeTriple, usize> = HashMap::new();
    let mut steps_of = Vec::with_capacity(words.len());
    for word in &words {
        let mut steps = rewrite_step(word, &sp, Direction::Forward);
        steps.sort_by_key(|s| (s.position, s.relation));
        for s in &steps {
            let u = &word[..s.position];
            if !sys.is_reduced(u) {
                continue;
            }
            let e = EdgeTriple { u: u.to_vec(), relation: s.relation, v: word[s.position + sp.relation(s.relation).left.len()..].to_vec() };
            if !is_principal_left_edge(&e, &sys) && !index.contains_key(&e) {
                index.insert(e.clone(), generators.len());
                generators.push(e);
            }
        }
        steps_of.push(steps);
    }

    let mut relators = Vec::new();
    for (word, steps) in words.iter().zip(&steps_of) {
        for s1 in steps {
            let u = &word[..s1.position];
            if !sys.is_reduced(u) {
                continue;
            }
            let r1 = sp.relation(s1.relation);
            let end1 = s1.position + r1.left.len();
            for s2 in steps.iter().filter(|s| s.position >= end1) {
                let r2 = sp.relation(s2.relation);
                let v = &word[end1..s2.position];
                let tail = &word[s2.position + r2.left.len()..];
                let e1 = EdgeTriple { u: u.to_vec(), relation: s1.relation, v: word[end1..].to_vec() };
                let mut vt = v.to_vec();
                vt.extend_from_slice(&r2.right);
                vt.extend_from_slice(tail);
                let e2 = EdgeTriple { u: u.to_vec(), relation: s1.relation, v: vt };
                let mut urv = u.to_vec();
                urv.extend_from_slice(&r1.right);
                urv.extend_from_slice(v);
                let e3 = EdgeTriple { u: sys.normal_form(&urv).result().to_vec(), relation: s2.relation, v: tail.to_vec() };
                let resolve = |e: &EdgeTriple| -> Option<Option<usize>> {
                    if is_principal_left_edge(e, &sys) {
                        Some(None)
                    } else {
                        index.get(e).map(|&i| Some(i))
                    }
                };
                let (Some(a), Some(b), Some(c)) = (resolve(&e1), resolve(&e2), resolve(&e3)) else {
                    truncated = true;
                    continue;
                };
                let rel = Relator { lhs: a, rhs: b, conjugator: c };
                if !rel.is_trivial() {
                    relators.push(rel);
                }
            }
        }
    }
    Ok(GroupPresentation { system: sp, reoriented, generators, relators, truncated })
}

/// `P′`: the ShortLex orientation of `P` followed by every ShortLex-oriented
/// relation between equal words up to a length bound, with derivations over
/// `P` for the extra relations.
#[derive(Clone, Debug)]
pub struct CompleteEmbedding {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    /// Relations of `P` whose orientation was reversed in `P′`.
    pub flipped: Vec<bool>,
    /// For extra relation `|R| + i`, moves over `P` from its left to its right side.
    pub witnesses: Vec<Vec<Move>>,
    /// Whether `P′` was verified complete and every equality was decided.
    pub complete: bool,
}

fn all_words(n: usize, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * n);
        for w in &layer {
            for l in 0..n {
                let mut x = w.clone();
                x.push(Letter(l as u32));
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn complete_embedding(p: &Arc<Presentation>, max_len: usize, oracle: &WordOracle) -> Result<CompleteEmbedding, PresentationError> {
    let oriented = p.shortlex_oriented();
    let flipped: Vec<bool> = p.relations().iter().zip(oriented.relations()).map(|(a, b)| a != b).collect();
    let mut rules: Vec<(Vec<Letter>, Vec<Letter>)> =
        oriented.relations().iter().map(|r| (r.left.to_vec(), r.right.to_vec())).collect();
    let mut present: HashSet<(Vec<Letter>, Vec<Letter>)> = rules.iter().cloned().collect();
    let mut decided = true;
    let words = all_words(p.alphabet_size(), max_len);
    let mut witnesses = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for v in &words[..i] {
            if shortlex(v, u) != Ordering::Less || present.contains(&(u.clone(), v.clone())) {
                continue;
            }
            match oracle.equal(u, v) {
                Equality::Equal => match oracle.derivation(u, v) {
                    Some(steps) => {
                        witnesses.push(steps.iter().map(|s| (s.position, s.relation, s.sign)).collect());
                        present.insert((u.clone(), v.clone()));
                        rules.push((u.clone(), v.clone()));
                    }
                    None => decided = false,
                },
                Equality::Distinct => {}
                Equality::Unknown => decided = false,
            }
        }
    }
    let target = Arc::new(Presentation::new(p.symbols().to_vec(), rules)?);
    let complete = decided && CompleteSystem::new(target.clone(), oracle.budget()).is_ok();
    Ok(CompleteEmbedding { source: p.clone(), target, flipped, witnesses, complete })
}

impl CompleteEmbedding {
    /// A diagram over `P` read as a diagram over `P′`.
    pub fn include(&self, d: &Diagram) -> Result<Diagram, DiagramError> {
        let cells: Vec<Cell> = d
            .cells()
            .iter()
            .map(|c| Cell::new(c.offset, c.relation, if self.flipped[c.relation] { c.sign.flip() } else { c.sign }))
            .collect();
        Diagram::from_cells(self.target.clone(), d.top().clone(), &cells)
    }

    /// Replaces every extra cell by its stored derivation.
    pub fn retract(&self, d: &Diagram) -> Result<Diagram, DiagramError> {
        let base = self.source.relations().len();
        let mut moves: Vec<Move> = Vec::new();
        for c in d.cells() {
            if c.relation < base {
                let sign = if self.flipped[c.relation] { c.sign.flip() } else { c.sign };
                moves.push((c.offset, c.relation, sign));
            } else {
                let w = &self.witnesses[c.relation - base];
                match c.sign {
                    Sign::Pos => moves.extend(shift(w, c.offset)),
                    Sign::Neg => moves.extend(shift(&reverse(w), c.offset)),
                }
            }
        }
        let steps = replay_moves(d.top(), &self.source, &moves);
        let cells: Vec<Cell> = steps.iter().map(|s| Cell::new(s.position, s.relation, s.sign)).collect();
        Diagram::from_cells(self.source.clone(), Word::clone(d.top()), &cells)
    }
}
