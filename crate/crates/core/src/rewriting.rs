//! One-step rewriting, completeness checking, principal-left normal forms and
//! the semigroup equality oracle.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use num::{BigInt, ToPrimitive};
use serde::Serialize;

use crate::budget::Budget;
use crate::completion::{complete_shortlex, replay_moves, reverse, shift, Move};
use crate::error::PresentationError;
use crate::linalg::{q, to_integers, LinearSystem};
use crate::presentation::{shortlex, Letter, Presentation, Sign, Word};

/// Which orientations of the relations a rewrite step may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Left side to right side only.
    Forward,
    /// Either orientation (edges of the Squier complex).
    Both,
}

/// A single application of a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub position: usize,
    pub relation: usize,
    pub sign: Sign,
    #[serde(skip)]
    pub result: Vec<Letter>,
}

/// Start positions of `pat` inside `w`.
pub fn occurrences<'a>(w: &'a [Letter], pat: &[Letter]) -> impl Iterator<Item = usize> + 'a {
    let pat: Vec<Letter> = pat.to_vec();
    let n = w.len();
    let m = pat.len();
    (0..=n.saturating_sub(m)).filter(move |&i| m <= n && m > 0 && w[i..i + m] == pat[..])
}

/// Replaces `w[pos..pos+len]` by `with`.
pub fn splice(w: &[Letter], pos: usize, len: usize, with: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(w.len() + with.len() - len.min(w.len()));
    out.extend_from_slice(&w[..pos]);
    out.extend_from_slice(with);
    out.extend_from_slice(&w[pos + len..]);
    out
}

/// All single-step successors of `w`, ordered by position, relation, sign.
pub fn rewrite_step(w: &[Letter], p: &Presentation, dir: Direction) -> Vec<Step> {
    let mut out = Vec::new();
    for (ri, r) in p.relations().iter().enumerate() {
        let signs: &[Sign] = match dir {
            Direction::Forward => &[Sign::Pos],
            Direction::Both => &[Sign::Pos, Sign::Neg],
        };
        for &sign in signs {
            let pat = r.pattern(sign);
            for pos in occurrences(w, pat) {
                out.push(Step { position: pos, relation: ri, sign, result: splice(w, pos, pat.len(), r.image(sign)) });
            }
        }
    }
    out.sort_by_key(|a| (a.position, a.relation, a.sign));
    out
}

/// Applies a step's relation at its position, checking the pattern.
pub fn apply(w: &[Letter], p: &Presentation, position: usize, relation: usize, sign: Sign) -> Option<Vec<Letter>> {
    let r = p.relations().get(relation)?;
    let pat = r.pattern(sign);
    if position + pat.len() > w.len() || w[position..position + pat.len()] != pat[..] {
        return None;
    }
    Some(splice(w, position, pat.len(), r.image(sign)))
}

/// A well-founded order proving termination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionOrder {
    /// Every rule's right side is ShortLex-smaller than its left side.
    ShortLex,
    /// Positive letter weights; words compare by total weight, then ShortLex.
    Weighted(Vec<u64>),
}

impl ReductionOrder {
    /// A quantity that never increases along rewrite steps.
    pub fn measure(&self, w: &[Letter]) -> u64 {
        match self {
            ReductionOrder::ShortLex => w.len() as u64,
            ReductionOrder::Weighted(ws) => w.iter().map(|l| ws[l.rank()]).sum(),
        }
    }
}

/// A non-terminating derivation `start →⁺ a·start·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Loop {
    #[serde(skip)]
    pub start: Vec<Letter>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    Proven(ReductionOrder),
    Disproven(Loop),
    Unknown,
}

/// Two reducts of an overlap word that reduce to different irreducible words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    #[serde(skip)]
    pub word: Vec<Letter>,
    pub rules: (usize, usize),
    #[serde(skip)]
    pub reducts: (Vec<Letter>, Vec<Letter>),
    #[serde(skip)]
    pub normal_forms: (Vec<Letter>, Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Confluence {
    Proven,
    Disproven(CriticalPair),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub terminating: Termination,
    pub locally_confluent: Confluence,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        matches!(self.terminating, Termination::Proven(_)) && matches!(self.locally_confluent, Confluence::Proven)
    }
}

fn letter_counts(p: &Presentation, w: &[Letter]) -> Vec<i64> {
    let mut c = vec![0i64; p.alphabet_size()];
    for l in w {
        c[l.rank()] += 1;
    }
    c
}

fn find_weights(p: &Presentation) -> Option<Vec<u64>> {
    let n = p.alphabet_size();
    let mut sys = LinearSystem::new(n);
    for r in p.relations() {
        let cl = letter_counts(p, &r.left);
        let cr = letter_counts(p, &r.right);
        let row = (0..n).map(|i| q(cl[i] - cr[i])).collect();
        let strict = shortlex(&r.left, &r.right) != Ordering::Greater;
        sys.ge.push((row, q(if strict { 1 } else { 0 })));
    }
    for i in 0..n {
        let mut row = vec![q(0); n];
        row[i] = q(1);
        sys.ge.push((row, q(1)));
    }
    let x = sys.solve()?;
    let ints: Vec<BigInt> = to_integers(&x);
    ints.iter().map(|v| v.to_u64()).collect()
}

fn find_loop(p: &Presentation, budget: &Budget) -> Option<Loop> {
    let per_start = (budget.max_words / p.relations().len().max(1)).max(16);
    for r in p.relations() {
        let start: Vec<Letter> = r.left.to_vec();
        let cap = 4 * start.len() + 8;
        let mut seen: HashMap<Vec<Letter>, Option<(Vec<Letter>, Step)>> = HashMap::new();
        seen.insert(start.clone(), None);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(w) = queue.pop_front() {
            if seen.len() > per_start {
                break;
            }
            for s in rewrite_step(&w, p, Direction::Forward) {
                if s.result.len() > cap {
                    continue;
                }
                let embeds = occurrences(&s.result, &start).next().is_some();
                if embeds {
                    let mut steps = vec![s.clone()];
                    let mut cur = w.clone();
                    while let Some(Some((prev, st))) = seen.get(&cur) {
                        steps.push(st.clone());
                        cur = prev.clone();
                    }
                    steps.reverse();
                    return Some(Loop { start, steps });
                }
                if !seen.contains_key(&s.result) {
                    seen.insert(s.result.clone(), Some((w.clone(), s.clone())));
                    queue.push_back(s.result.clone());
                }
            }
        }
    }
    None
}

/// Decides termination by the two sufficient criteria, or finds a loop.
pub fn check_termination(p: &Presentation, budget: &Budget) -> Termination {
    if p.is_shortlex_oriented() {
        return Termination::Proven(ReductionOrder::ShortLex);
    }
    if let Some(ws) = find_weights(p) {
        return Termination::Proven(ReductionOrder::Weighted(ws));
    }
    match find_loop(p, budget) {
        Some(l) => Termination::Disproven(l),
        None => Termination::Unknown,
    }
}

/// The principal-left step: smallest non-reduced prefix, longest suffix of it
/// that is a left side, ShortLex-least right side (lowest index on ties).
pub fn principal_left_step(w: &[Letter], p: &Presentation) -> Option<Step> {
    for end in 1..=w.len() {
        let prefix = &w[..end];
        let mut best: Option<(usize, usize)> = None;
        for (ri, r) in p.relations().iter().enumerate() {
            let l = &r.left;
            if l.len() <= end && prefix[end - l.len()..] == l[..] {
                best = match best {
                    None => Some((ri, l.len())),
                    Some((bi, bl)) => {
                        let better = l.len() > bl
                            || (l.len() == bl && shortlex(&r.right, &p.relation(bi).right) == Ordering::Less);
                        if better {
                            Some((ri, l.len()))
                        } else {
                            Some((bi, bl))
                        }
                    }
                };
            }
        }
        if let Some((ri, len)) = best {
            let pos = end - len;
            let result = splice(w, pos, len, &p.relation(ri).right);
            return Some(Step { position: pos, relation: ri, sign: Sign::Pos, result });
        }
    }
    None
}

/// A principal-left derivation to an irreducible word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub start: Vec<Letter>,
    pub steps: Vec<Step>,
}

impl Reduction {
    pub fn result(&self) -> &[Letter] {
        self.steps.last().map(|s| &s.result[..]).unwrap_or(&self.start)
    }
}

/// Follows principal-left steps until the word is irreducible. Returns `None`
/// if `max_steps` is exceeded.
pub fn reduce_principal_left(w: &[Letter], p: &Presentation, max_steps: usize) -> Option<Reduction> {
    let mut steps = Vec::new();
    let mut cur = w.to_vec();
    while let Some(s) = principal_left_step(&cur, p) {
        if steps.len() >= max_steps {
            return None;
        }
        cur = s.result.clone();
        steps.push(s);
    }
    Some(Reduction { start: w.to_vec(), steps })
}

/// An overlap word, the two rules meeting in it, and their two rewrites.
type Overlap = (Vec<Letter>, (usize, usize), Vec<Letter>, Vec<Letter>);

fn critical_pairs(p: &Presentation) -> Vec<Overlap> {
    let rels = p.relations();
    let mut out = Vec::new();
    for (i, ri) in rels.iter().enumerate() {
        for (j, rj) in rels.iter().enumerate() {
            let (li, lj) = (&ri.left, &rj.left);
            for k in 1..li.len().min(lj.len()) {
                if li[li.len() - k..] == lj[..k] {
                    let mut word = li.to_vec();
                    word.extend_from_slice(&lj[k..]);
                    let mut a = ri.right.to_vec();
                    a.extend_from_slice(&lj[k..]);
                    let mut b = li[..li.len() - k].to_vec();
                    b.extend_from_slice(&rj.right);
                    out.push((word, (i, j), a, b));
                }
            }
            if i != j {
                for pos in occurrences(li, lj) {
                    let b = splice(li, pos, lj.len(), &rj.right);
                    out.push((li.to_vec(), (i, j), ri.right.to_vec(), b));
                }
            }
        }
    }
    out
}

/// Knuth–Bendix local confluence check with bounded normalization.
pub fn check_local_confluence(p: &Presentation, budget: &Budget) -> Confluence {
    let mut unknown = false;
    for (word, rules, a, b) in critical_pairs(p) {
        let na = reduce_principal_left(&a, p, budget.max_steps);
        let nb = reduce_principal_left(&b, p, budget.max_steps);
        match (na, nb) {
            (Some(x), Some(y)) => {
                if x.result() != y.result() {
                    return Confluence::Disproven(CriticalPair {
                        word,
                        rules,
                        normal_forms: (x.result().to_vec(), y.result().to_vec()),
                        reducts: (a, b),
                    });
                }
            }
            _ => unknown = true,
        }
    }
    if unknown {
        Confluence::Unknown
    } else {
        Confluence::Proven
    }
}

/// Runs both halves of the completeness check.
pub fn check_completeness(p: &Presentation, budget: &Budget) -> CompletenessReport {
    let terminating = check_termination(p, budget);
    let locally_confluent = if matches!(terminating, Termination::Disproven(_)) {
        // Normalization cannot be trusted to stop; still look for a cheap refutation.
        let mut small = *budget;
        small.max_steps = small.max_steps.min(200);
        match check_local_confluence(p, &small) {
            Confluence::Disproven(c) => Confluence::Disproven(c),
            _ => Confluence::Unknown,
        }
    } else {
        check_local_confluence(p, budget)
    };
    CompletenessReport { terminating, locally_confluent }
}

/// A presentation whose completeness has been proven.
#[derive(Clone, Debug)]
pub struct CompleteSystem {
    presentation: Arc<Presentation>,
    order: ReductionOrder,
    max_steps: usize,
}

impl CompleteSystem {
    pub fn new(p: Arc<Presentation>, budget: &Budget) -> Result<CompleteSystem, CompletenessReport> {
        let report = check_completeness(&p, budget);
        match (&report.terminating, report.is_complete()) {
            (Termination::Proven(order), true) => {
                Ok(CompleteSystem { order: order.clone(), presentation: p, max_steps: budget.max_steps })
            }
            _ => Err(report),
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn order(&self) -> &ReductionOrder {
        &self.order
    }

    /// The unique irreducible word equal to `w`, with its principal-left trace.
    pub fn normal_form(&self, w: &[Letter]) -> Reduction {
        // Termination is proven, so the step cap only guards against absurd inputs.
        reduce_principal_left(w, &self.presentation, self.max_steps.saturating_mul(1000))
            .expect("terminating system exceeded its step cap")
    }

    pub fn is_reduced(&self, w: &[Letter]) -> bool {
        principal_left_step(w, &self.presentation).is_none()
    }
}

/// `normal_form` for callers holding only a presentation.
pub fn normal_form(w: &Word, p: &Arc<Presentation>, budget: &Budget) -> Result<Reduction, PresentationError> {
    let sys = CompleteSystem::new(p.clone(), budget).map_err(|_| PresentationError::NotComplete)?;
    Ok(sys.normal_form(w))
}

/// Outcome of a budget-bounded equality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equality {
    Equal,
    Distinct,
    Unknown,
}

/// A breadth-first enumeration of (part of) an equivalence class.
#[derive(Clone, Debug)]
pub struct ClassSearch {
    pub words: Vec<Vec<Letter>>,
    pub parent: HashMap<Vec<Letter>, Option<(usize, Step)>>,
    pub complete: bool,
}

/// Average word length allowed per budgeted word: searches stop once the
/// stored words hold more than `max_words * LETTERS_PER_WORD` letters.
pub const LETTERS_PER_WORD: usize = 32;

/// Enumerates `[w]` by BFS in both directions, stopping after `max_words`
/// words or `max_words * LETTERS_PER_WORD` letters.
pub fn bfs_class(w: &[Letter], p: &Presentation, max_words: usize) -> ClassSearch {
    let mut words = vec![w.to_vec()];
    let mut parent: HashMap<Vec<Letter>, Option<(usize, Step)>> = HashMap::new();
    parent.insert(w.to_vec(), None);
    let mut head = 0;
    let mut complete = true;
    let max_letters = max_words.saturating_mul(LETTERS_PER_WORD).max(w.len());
    let mut letters = w.len();
    while head < words.len() {
        let cur = words[head].clone();
        for s in rewrite_step(&cur, p, Direction::Both) {
            if !parent.contains_key(&s.result) {
                letters += s.result.len();
                if words.len() >= max_words || letters > max_letters {
                    complete = false;
                    break;
                }
                parent.insert(s.result.clone(), Some((head, s.clone())));
                words.push(s.result.clone());
            }
        }
        if !complete {
            break;
        }
        head += 1;
    }
    ClassSearch { words, parent, complete }
}

impl ClassSearch {
    /// Steps leading from the search root to `target`.
    pub fn path_to(&self, target: &[Letter]) -> Option<Vec<Step>> {
        let mut steps = Vec::new();
        let mut cur = target.to_vec();
        loop {
            match self.parent.get(&cur)? {
                None => break,
                Some((idx, s)) => {
                    steps.push(s.clone());
                    cur = self.words[*idx].clone();
                }
            }
        }
        steps.reverse();
        Some(steps)
    }
}

/// Inverts a derivation: steps from the end word back to the start word.
pub fn reverse_steps(start: &[Letter], steps: &[Step]) -> Vec<Step> {
    let mut words = vec![start.to_vec()];
    for s in steps {
        words.push(s.result.clone());
    }
    let mut out = Vec::new();
    for (i, s) in steps.iter().enumerate().rev() {
        out.push(Step { position: s.position, relation: s.relation, sign: s.sign.flip(), result: words[i].clone() });
    }
    out
}

const MAX_COMPLETION_RULES: usize = 200;

enum Mode {
    /// A complete system with, per rule, a derivation over the original relations.
    Complete(CompleteSystem, Vec<Vec<Move>>),
    Search,
}

/// Decides equality in the semigroup and picks class representatives.
///
/// When the presentation, its ShortLex reorientation, or a bounded ShortLex
/// completion of it is complete, normal forms give exact answers; otherwise
/// classes are searched under the budget.
pub struct WordOracle {
    presentation: Arc<Presentation>,
    mode: Mode,
    budget: Budget,
    reps: Mutex<HashMap<Vec<Letter>, Option<Vec<Letter>>>>,
}

impl WordOracle {
    pub fn new(p: Arc<Presentation>, budget: &Budget) -> WordOracle {
        let single = |sign: &dyn Fn(usize) -> Sign| -> Vec<Vec<Move>> {
            (0..p.relations().len()).map(|k| vec![(0, k, sign(k))]).collect()
        };
        let mode = match CompleteSystem::new(p.clone(), budget) {
            Ok(sys) => Mode::Complete(sys, single(&|_| Sign::Pos)),
            Err(_) => {
                let flipped: Vec<bool> =
                    p.relations().iter().map(|r| shortlex(&r.left, &r.right) == Ordering::Less).collect();
                let re = Arc::new(p.shortlex_oriented());
                match CompleteSystem::new(re, budget) {
                    Ok(sys) => Mode::Complete(sys, single(&|k| if flipped[k] { Sign::Neg } else { Sign::Pos })),
                    Err(_) => match complete_shortlex(&p, budget, MAX_COMPLETION_RULES) {
                        Some(c) => match CompleteSystem::new(Arc::new(c.system), budget) {
                            Ok(sys) => Mode::Complete(sys, c.proofs),
                            Err(_) => Mode::Search,
                        },
                        None => Mode::Search,
                    },
                }
            }
        };
        WordOracle { presentation: p, mode, budget: *budget, reps: Mutex::new(HashMap::new()) }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// The complete system used for exact answers, if any.
    pub fn complete_system(&self) -> Option<&CompleteSystem> {
        match &self.mode {
            Mode::Complete(s, _) => Some(s),
            Mode::Search => None,
        }
    }

    /// Whether answers are exact (no budget-dependent `Unknown`).
    pub fn is_exact(&self) -> bool {
        matches!(self.mode, Mode::Complete(..))
    }

    /// The designated representative of the class of `w` (empty stays empty).
    pub fn representative(&self, w: &[Letter]) -> Option<Vec<Letter>> {
        if w.is_empty() {
            return Some(Vec::new());
        }
        if let Some(r) = self.reps.lock().expect("poisoned").get(w) {
            return r.clone();
        }
        let rep = match &self.mode {
            Mode::Complete(sys, _) => Some(sys.normal_form(w).result().to_vec()),
            Mode::Search => {
                let c = bfs_class(w, &self.presentation, self.budget.max_words);
                if c.complete {
                    c.words.iter().min_by(|a, b| shortlex(a, b)).cloned()
                } else {
                    None
                }
            }
        };
        self.reps.lock().expect("poisoned").insert(w.to_vec(), rep.clone());
        rep
    }

    /// Equality modulo the presentation. The empty word equals only itself.
    pub fn equal(&self, u: &[Letter], v: &[Letter]) -> Equality {
        if u == v {
            return Equality::Equal;
        }
        if u.is_empty() || v.is_empty() {
            return Equality::Distinct;
        }
        match &self.mode {
            Mode::Complete(..) => {
                if self.representative(u) == self.representative(v) {
                    Equality::Equal
                } else {
                    Equality::Distinct
                }
            }
            Mode::Search => self.bidirectional(u, v).0,
        }
    }

    /// A derivation from `u` to `v` (steps relative to the original relations).
    pub fn derivation(&self, u: &[Letter], v: &[Letter]) -> Option<Vec<Step>> {
        if u == v {
            return Some(Vec::new());
        }
        match &self.mode {
            Mode::Complete(sys, proofs) => {
                let ru = sys.normal_form(u);
                let rv = sys.normal_form(v);
                if ru.result() != rv.result() {
                    return None;
                }
                let expand = |r: &Reduction| -> Vec<Move> {
                    r.steps.iter().flat_map(|s| shift(&proofs[s.relation], s.position)).collect()
                };
                let mut moves = expand(&ru);
                moves.extend(reverse(&expand(&rv)));
                Some(replay_moves(u, &self.presentation, &moves))
            }
            Mode::Search => self.bidirectional(u, v).1,
        }
    }

    fn bidirectional(&self, u: &[Letter], v: &[Letter]) -> (Equality, Option<Vec<Step>>) {
        let p = &self.presentation;
        let mut sides = [SearchSide::new(u), SearchSide::new(v)];
        let limit = self.budget.max_words;
        loop {
            let total = sides[0].order.len() + sides[1].order.len();
            if total > limit || sides[0].letters + sides[1].letters > limit.saturating_mul(LETTERS_PER_WORD) {
                return (Equality::Unknown, None);
            }
            let which = if sides[0].frontier_len() <= sides[1].frontier_len() { 0 } else { 1 };
            let which = if sides[which].exhausted() { 1 - which } else { which };
            if sides[which].exhausted() {
                return (Equality::Distinct, None);
            }
            let (first, second) = sides.split_at_mut(1);
            let (me, other) = if which == 0 { (&mut first[0], &second[0]) } else { (&mut second[0], &first[0]) };
            if let Some(meet) = me.expand_one(p, &other.seen) {
                let a = sides[0].path_from_root(&meet);
                let b = sides[1].path_from_root(&meet);
                let mut steps = a;
                steps.extend(reverse_steps(v, &b));
                return (Equality::Equal, Some(steps));
            }
            if sides[which].exhausted() {
                return (Equality::Distinct, None);
            }
        }
    }
}

struct SearchSide {
    order: Vec<Vec<Letter>>,
    seen: HashMap<Vec<Letter>, Option<(usize, Step)>>,
    head: usize,
    letters: usize,
}

impl SearchSide {
    fn new(w: &[Letter]) -> SearchSide {
        let mut seen = HashMap::new();
        seen.insert(w.to_vec(), None);
        SearchSide { order: vec![w.to_vec()], seen, head: 0, letters: w.len() }
    }

    fn frontier_len(&self) -> usize {
        self.order.len() - self.head
    }

    fn exhausted(&self) -> bool {
        self.head >= self.order.len()
    }

    fn expand_one(&mut self, p: &Presentation, other: &HashMap<Vec<Letter>, Option<(usize, Step)>>) -> Option<Vec<Letter>> {
        let cur = self.order[self.head].clone();
        if other.contains_key(&cur) {
            return Some(cur);
        }
        let idx = self.head;
        self.head += 1;
        for s in rewrite_step(&cur, p, Direction::Both) {
            if !self.seen.contains_key(&s.result) {
                self.seen.insert(s.result.clone(), Some((idx, s.clone())));
                self.letters += s.result.len();
                self.order.push(s.result.clone());
                if other.contains_key(&s.result) {
                    return Some(s.result);
                }
            }
        }
        None
    }

    fn path_from_root(&self, target: &[Letter]) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut cur = target.to_vec();
        while let Some(Some((idx, s))) = self.seen.get(&cur) {
            steps.push(s.clone());
            cur = self.order[*idx].clone();
        }
        steps.reverse();
        steps
    }
}

/// Letters that can begin (or end) a word in the class of `w`: an
/// over-approximation closed under relations applied at the boundary.
pub fn boundary_letters(w: &[Letter], p: &Presentation, first: bool) -> HashSet<Letter> {
    let mut set = HashSet::new();
    let Some(&start) = (if first { w.first() } else { w.last() }) else {
        return set;
    };
    set.insert(start);
    let mut changed = true;
    while changed {
        changed = false;
        for r in p.relations() {
            let ends = |x: &Word| if first { x[0] } else { x[x.len() - 1] };
            for (a, b) in [(ends(&r.left), ends(&r.right)), (ends(&r.right), ends(&r.left))] {
                if set.contains(&a) && set.insert(b) {
                    changed = true;
                }
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pres(src: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation(src).unwrap().presentation)
    }

    fn w(p: &Presentation, s: &str) -> Vec<Letter> {
        p.parse_letters(s).unwrap()
    }

    const WORKED: &str = "letters a b\nrule a^3 = a\nrule a^3 = a^2\nrule b a^3 = a^3 b\n";
    const TWO_PATHS: &str = "letters a b c x y\nrule a = b\nrule x = y\nrule c = a x\nrule c = b x\n";

    #[test]
    fn forward_steps() {
        let p = pres("letters x\nrule x x = x\n");
        let s = rewrite_step(&w(&p, "x x"), &p, Direction::Forward);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].position, s[0].relation, s[0].result.len()), (0, 0, 1));
        let p = pres(TWO_PATHS);
        assert!(rewrite_step(&w(&p, "b y"), &p, Direction::Forward).is_empty());
        let p = pres(WORKED);
        let steps = rewrite_step(&w(&p, "a b a^3 b a^4"), &p, Direction::Forward);
        assert!(steps.iter().any(|s| s.result == w(&p, "a^4 b^2 a^4")));
    }

    #[test]
    fn worked_principal_left_trace() {
        let p = pres(WORKED);
        let red = reduce_principal_left(&w(&p, "a b a^3 b a^4"), &p, 100).unwrap();
        let trace: Vec<String> = red.steps.iter().map(|s| p.render_compact(&s.result)).collect();
        assert_eq!(trace, ["a^4 b^2 a^4", "a^2 b^2 a^4", "a^2 b a^3 b a", "a^5 b^2 a", "a^3 b^2 a", "a b^2 a"]);
        assert_eq!(red.steps[1].relation, 0);
    }

    #[test]
    fn worked_presentation_terminates_but_is_not_confluent() {
        let p = pres(WORKED);
        let r = check_completeness(&p, &Budget::default());
        assert_eq!(r.terminating, Termination::Proven(ReductionOrder::ShortLex));
        assert!(matches!(r.locally_confluent, Confluence::Disproven(_)));
    }

    #[test]
    fn completeness_examples() {
        let b = Budget::default();
        assert!(check_completeness(&pres("letters x\nrule x x = x\n"), &b).is_complete());
        let r = check_completeness(&pres("letters x\nrule x = x x\n"), &b);
        match r.terminating {
            Termination::Disproven(l) => assert_eq!(l.steps[0].result.len(), 2),
            other => panic!("expected a loop, got {other:?}"),
        }
        let r = check_completeness(&pres(TWO_PATHS), &b);
        assert!(r.is_complete(), "{r:?}");
        assert!(matches!(r.terminating, Termination::Proven(ReductionOrder::Weighted(_))));
    }

    #[test]
    fn normal_form_of_powers() {
        let p = pres("letters x\nrule x x = x\n");
        let nf = normal_form(&p.parse_word("x^5").unwrap(), &p, &Budget::default()).unwrap();
        assert_eq!(nf.result(), &w(&p, "x")[..]);
        let nf = normal_form(&p.parse_word("x").unwrap(), &p, &Budget::default()).unwrap();
        assert!(nf.steps.is_empty());
        assert!(normal_form(&p.parse_word("x").unwrap(), &pres("letters x\nrule x = x x\n"), &Budget::default()).is_err());
    }

    #[test]
    fn oracle_examples() {
        let b = Budget::default();
        let p = pres("letters a b c x y\nrule a = b\nrule b = c\nrule c = a\nrule x = y\n");
        let o = WordOracle::new(p.clone(), &b);
        assert_eq!(o.equal(&w(&p, "a"), &w(&p, "x")), Equality::Distinct);
        assert_eq!(o.equal(&w(&p, "a x"), &w(&p, "c y")), Equality::Equal);
        let p = pres("letters x a1 a2 a3 b1 b2 b3\nrule x = x x\nrule a1 = a2 x\nrule a2 = a3 x\nrule b1 = x b2\nrule b2 = x b3\n");
        let o = WordOracle::new(p.clone(), &b);
        assert_eq!(o.equal(&w(&p, "a1 x"), &w(&p, "a1")), Equality::Equal);
        let d = o.derivation(&w(&p, "a1 x"), &w(&p, "a1")).unwrap();
        let mut cur = w(&p, "a1 x");
        for s in &d {
            cur = apply(&cur, &p, s.position, s.relation, s.sign).unwrap();
        }
        assert_eq!(cur, w(&p, "a1"));
    }

    #[test]
    fn search_mode_derivations_replay() {
        let p = pres("letters a b c\nrule a b = b a\nrule b c = c b\nrule a c = c a\n");
        let budget = Budget { max_steps: 10, ..Budget::default() };
        let o = WordOracle::new(p.clone(), &budget);
        let d = o.derivation(&w(&p, "a b c"), &w(&p, "c b a")).unwrap();
        let mut cur = w(&p, "a b c");
        for s in &d {
            cur = apply(&cur, &p, s.position, s.relation, s.sign).unwrap();
        }
        assert_eq!(cur, w(&p, "c b a"));
    }
}
