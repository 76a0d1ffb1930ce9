//! Squier complexes: equivalence classes with their edges and squares, balls
//! in the median graph of diagrams, hyperplane labels, transversality and
//! conspiciality.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::budget::Budget;
use crate::diagram::Diagram;
use crate::error::DiagramError;
use crate::linalg::{nullspace, q, rank, LinearSystem, Q};
use crate::presentation::{Letter, Presentation, Sign, Word};
use crate::rewriting::{boundary_letters, rewrite_step, Direction, Equality, WordOracle};

/// An edge `(a, ℓ → r, b)` between `aℓb` and `arb`, with `ℓ = r` a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SquierEdge {
    pub from: usize,
    pub to: usize,
    pub position: usize,
    pub relation: usize,
}

/// Two edges at disjoint positions of one word, spanning a square.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SquierSquare {
    /// The corner where both left sides occur.
    pub corner: usize,
    /// Edge indices `corner → w₁`, `w₁ → w₁₂`, `corner → w₂`, `w₂ → w₁₂`.
    pub edges: [usize; 4],
}

/// The enumerated part of a component `[w]` of the Squier complex.
#[derive(Clone, Debug, Serialize)]
pub struct SquierComponent {
    #[serde(skip)]
    pub words: Vec<Vec<Letter>>,
    pub edges: Vec<SquierEdge>,
    pub squares: Vec<SquierSquare>,
    /// Whether the class was exhausted (otherwise truncated at the budget).
    pub complete: bool,
}

/// Enumerates `[w]` breadth first, with every edge and square among the
/// listed words.
pub fn enumerate_class(w: &[Letter], p: &Presentation, budget: &Budget) -> SquierComponent {
    let search = crate::rewriting::bfs_class(w, p, budget.max_words);
    let words = search.words;
    let index: HashMap<&[Letter], usize> = words.iter().enumerate().map(|(i, w)| (&w[..], i)).collect();
    let mut edges = Vec::new();
    let mut edge_of: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (i, u) in words.iter().enumerate() {
        for s in rewrite_step(u, p, Direction::Forward) {
            if let Some(&j) = index.get(&s.result[..]) {
                edge_of.insert((i, s.position, s.relation), edges.len());
                edges.push(SquierEdge { from: i, to: j, position: s.position, relation: s.relation });
            }
        }
    }
    let mut squares = Vec::new();
    for (i, u) in words.iter().enumerate() {
        let steps: Vec<_> = rewrite_step(u, p, Direction::Forward)
            .into_iter()
            .filter_map(|s| index.get(&s.result[..]).map(|&t| (s.position, s.relation, t)))
            .collect();
        for (x, &(pos1, rel1, w1)) in steps.iter().enumerate() {
            let r1 = p.relation(rel1);
            for &(pos2, rel2, w2) in &steps[x + 1..] {
                if pos1 + r1.left.len() > pos2 {
                    continue;
                }
                let shifted = (pos2 as isize + r1.delta(Sign::Pos)) as usize;
                let e = [
                    edge_of.get(&(i, pos1, rel1)),
                    edge_of.get(&(w1, shifted, rel2)),
                    edge_of.get(&(i, pos2, rel2)),
                    edge_of.get(&(w2, pos1, rel1)),
                ];
                if let [Some(&a), Some(&b), Some(&c), Some(&d)] = e {
                    squares.push(SquierSquare { corner: i, edges: [a, b, c, d] });
                }
            }
        }
    }
    SquierComponent { words, edges, squares, complete: search.complete }
}

impl SquierComponent {
    /// Rank of the first homology of the (connected) enumerated component:
    /// `E − V + 1 − rank ∂₂`.
    pub fn first_homology_rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self
            .squares
            .iter()
            .map(|s| {
                let mut row = vec![0i64; self.edges.len()];
                row[s.edges[0]] += 1;
                row[s.edges[1]] += 1;
                row[s.edges[2]] -= 1;
                row[s.edges[3]] -= 1;
                row
            })
            .collect();
        self.edges.len() + 1 - self.words.len() - rank(&rows)
    }

    /// JSON export under the versioned schema `squier/1`.
    pub fn to_json(&self, p: &Presentation) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                let w = &self.words[e.from];
                let r = p.relation(e.relation);
                serde_json::json!({
                    "from": e.from,
                    "to": e.to,
                    "left": p.render(&w[..e.position]),
                    "relation": e.relation,
                    "right": p.render(&w[e.position + r.left.len()..]),
                })
            })
            .collect();
        serde_json::json!({
            "schema": "squier/1",
            "vertices": self.words.iter().map(|w| p.render(w)).collect::<Vec<_>>(),
            "edges": edges,
            "squares": self.squares.iter().map(|s| serde_json::json!({"corner": s.corner, "edges": s.edges})).collect::<Vec<_>>(),
            "complete": self.complete,
            "first_homology_rank": self.first_homology_rank(),
        })
    }

    /// Graphviz rendering: vertices labelled by words, edges by triples.
    pub fn to_dot(&self, p: &Presentation) -> String {
        let mut out = String::from("graph squier {\n");
        for (i, w) in self.words.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", p.render(w));
        }
        for e in &self.edges {
            let w = &self.words[e.from];
            let r = p.relation(e.relation);
            let a = &w[..e.position];
            let b = &w[e.position + r.left.len()..];
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"({} | {} > {} | {})\"];",
                e.from,
                e.to,
                p.render(a),
                p.render(&r.left),
                p.render(&r.right),
                p.render(b)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A ball in the median graph of diagrams with a fixed top word.
#[derive(Clone, Debug)]
pub struct MedianBall {
    pub center: Diagram,
    pub radius: usize,
    pub vertices: Vec<Diagram>,
    /// Distance of each vertex from the center.
    pub depth: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Whether the frontier budget cut the ball short.
    pub truncated: bool,
}

/// Grows the ball of `radius` around `center` by right multiplication with
/// atomic diagrams.
pub fn median_ball(center: &Diagram, radius: usize, budget: &Budget) -> MedianBall {
    let mut vertices = vec![center.clone()];
    let mut depth = vec![0];
    let mut index: HashMap<Diagram, usize> = HashMap::from([(center.clone(), 0)]);
    let mut edges = BTreeSet::new();
    let mut head = 0;
    let mut truncated = false;
    while head < vertices.len() {
        let d = depth[head];
        if d < radius {
            for n in vertices[head].neighbours() {
                let j = match index.get(&n) {
                    Some(&j) => j,
                    None => {
                        if vertices.len() >= budget.max_frontier {
                            truncated = true;
                            continue;
                        }
                        index.insert(n.clone(), vertices.len());
                        vertices.push(n);
                        depth.push(d + 1);
                        vertices.len() - 1
                    }
                };
                edges.insert((head.min(j), head.max(j)));
            }
        }
        head += 1;
    }
    MedianBall { center: center.clone(), radius, vertices, depth, edges: edges.into_iter().collect(), truncated }
}

impl MedianBall {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph ball {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", v.render());
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// `#(Φ⁻¹ ∘ Ψ)`.
pub fn distance(a: &Diagram, b: &Diagram) -> Result<usize, DiagramError> {
    a.distance(b)
}

/// `Δ₁ ∘ gcp(Δ₁⁻¹Δ₂, Δ₁⁻¹Δ₃)`.
pub fn median(a: &Diagram, b: &Diagram, c: &Diagram) -> Result<Diagram, DiagramError> {
    Diagram::median(a, b, c)
}

/// An oriented hyperplane `[a, ℓ → r, b]` with coordinates given by class
/// representatives (empty for the trivial context).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HyperplaneLabel {
    #[serde(skip)]
    pub left: Vec<Letter>,
    pub relation: usize,
    #[serde(skip)]
    pub right: Vec<Letter>,
}

impl HyperplaneLabel {
    pub fn render(&self, p: &Presentation) -> String {
        let r = p.relation(self.relation);
        let ctx = |w: &[Letter]| if w.is_empty() { "1".to_string() } else { p.render(w) };
        format!("[{}, {} -> {}, {}]", ctx(&self.left), p.render(&r.left), p.render(&r.right), ctx(&self.right))
    }
}

/// The label of the hyperplane crossed by applying `relation` at `position`
/// of `w` (in either direction), or `None` if a representative is unknown.
pub fn label_at(w: &[Letter], position: usize, relation: usize, sign: Sign, oracle: &WordOracle) -> Option<HyperplaneLabel> {
    let p = oracle.presentation();
    let len = p.relation(relation).pattern(sign).len();
    let left = oracle.representative(&w[..position])?;
    let right = oracle.representative(&w[position + len..])?;
    Some(HyperplaneLabel { left, relation, right })
}

/// The signed hyperplane labels of the canonical cells of `d`.
pub fn hyperplane_word(d: &Diagram, oracle: &WordOracle) -> Option<Vec<(HyperplaneLabel, Sign)>> {
    let words = d.words();
    d.cells()
        .iter()
        .enumerate()
        .map(|(i, c)| label_at(&words[i], c.offset, c.relation, c.sign, oracle).map(|l| (l, c.sign)))
        .collect()
}

/// Representatives of the classes of prefixes (or suffixes) of words in
/// `[w]`, when the oracle is exact and there are at most `max_words` of them.
///
/// An edge `s ℓ t -> s r t` inside `[w]` creates the new prefix classes
/// `[s r']` for prefixes `r'` of `r`, and it exists exactly when `[s]` and
/// `[s ℓ]` are prefix classes. Closing the prefixes of `w` under this rule
/// therefore yields every prefix class and nothing else.
fn factor_classes(w: &[Letter], oracle: &WordOracle, suffix: bool) -> Option<BTreeSet<Vec<Letter>>> {
    if !oracle.is_exact() {
        return None;
    }
    let p = oracle.presentation();
    let join = |s: &[Letter], x: &[Letter]| if suffix { cat(&[x, s]) } else { cat(&[s, x]) };
    let mut classes = BTreeSet::new();
    for i in 0..=w.len() {
        let part = if suffix { &w[i..] } else { &w[..i] };
        classes.insert(oracle.representative(part)?);
    }
    loop {
        let mut fresh = Vec::new();
        for s in &classes {
            for r in p.relations() {
                for (pat, img) in [(&r.left[..], &r.right[..]), (&r.right[..], &r.left[..])] {
                    if !classes.contains(&oracle.representative(&join(s, pat))?) {
                        continue;
                    }
                    for k in 1..img.len() {
                        let piece = if suffix { &img[k..] } else { &img[..k] };
                        let rep = oracle.representative(&join(s, piece))?;
                        if !classes.contains(&rep) {
                            fresh.push(rep);
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            return Some(classes);
        }
        classes.extend(fresh);
        if classes.len() > oracle.budget().max_words {
            return None;
        }
    }
}

/// Every label `[a, ℓ -> r, b]` with `a ℓ b` in `[w]`, found by pairing
/// prefix and suffix classes. Works for infinite classes.
fn labels_by_factors(w: &[Letter], oracle: &WordOracle) -> Option<BTreeSet<HyperplaneLabel>> {
    let prefixes = factor_classes(w, oracle, false)?;
    let suffixes = factor_classes(w, oracle, true)?;
    let mut set = BTreeSet::new();
    for (relation, r) in oracle.presentation().relations().iter().enumerate() {
        for a in &prefixes {
            for b in &suffixes {
                if oracle.equal(&cat(&[a, &r.left, b]), w) == Equality::Equal {
                    set.insert(HyperplaneLabel { left: a.clone(), relation, right: b.clone() });
                }
            }
        }
    }
    Some(set)
}

/// The distinct hyperplane labels of `[w]`, and whether the list is known to
/// be complete. Incomplete lists cover the enumerated part of the class.
pub fn hyperplanes(w: &[Letter], oracle: &WordOracle) -> (Vec<HyperplaneLabel>, bool) {
    let p = oracle.presentation();
    let comp = enumerate_class(w, p, oracle.budget());
    let mut set = BTreeSet::new();
    let mut certain = comp.complete;
    match labels_by_factors(w, oracle).filter(|_| !comp.complete) {
        Some(all) => {
            set = all;
            certain = true;
        }
        None => {
            for e in &comp.edges {
                match label_at(&comp.words[e.from], e.position, e.relation, Sign::Pos, oracle) {
                    Some(l) => {
                        set.insert(l);
                    }
                    None => certain = false,
                }
            }
        }
    }
    let mut labels: Vec<HyperplaneLabel> = set.into_iter().collect();
    labels.sort_by(|a, b| (a.relation, a.left.len(), &a.left, &a.right).cmp(&(b.relation, b.left.len(), &b.left, &b.right)));
    (labels, certain)
}

/// Linear letter-count functionals preserved by every relation.
pub struct Invariants {
    basis: Vec<Vec<Q>>,
    nletters: usize,
}

impl Invariants {
    pub fn new(p: &Presentation) -> Invariants {
        let n = p.alphabet_size();
        let rows: Vec<Vec<i64>> = p
            .relations()
            .iter()
            .map(|r| {
                let mut row = vec![0i64; n];
                for l in r.left.iter() {
                    row[l.rank()] += 1;
                }
                for l in r.right.iter() {
                    row[l.rank()] -= 1;
                }
                row
            })
            .collect();
        let basis = if rows.is_empty() {
            (0..n)
                .map(|i| {
                    let mut v = vec![q(0); n];
                    v[i] = q(1);
                    v
                })
                .collect()
        } else {
            nullspace(&rows, n)
        };
        Invariants { basis, nletters: n }
    }

    pub fn eval(&self, w: &[Letter]) -> Vec<Q> {
        self.basis.iter().map(|phi| w.iter().map(|l| phi[l.rank()].clone()).sum()).collect()
    }

    /// Letters that can occur in a non-empty word all of whose invariants vanish.
    pub fn zero_letters(&self) -> Vec<bool> {
        (0..self.nletters)
            .map(|l| {
                let mut lp = CountLp::new(self, 1);
                lp.equal(&[1], vec![q(0); self.basis.len()]);
                lp.force_letter(0, l);
                lp.feasible()
            })
            .collect()
    }
}

/// Feasibility of letter-count constraints over several unknown words,
/// relaxed to non-negative rationals.
pub struct CountLp<'a> {
    inv: &'a Invariants,
    unknowns: usize,
    sys: LinearSystem,
}

impl<'a> CountLp<'a> {
    pub fn new(inv: &'a Invariants, unknowns: usize) -> CountLp<'a> {
        CountLp { inv, unknowns, sys: LinearSystem::new(unknowns * inv.nletters) }
    }

    /// `Σⱼ coefⱼ · φ(xⱼ) = target` for every invariant `φ`.
    pub fn equal(&mut self, coefs: &[i64], target: Vec<Q>) {
        let n = self.inv.nletters;
        for (k, phi) in self.inv.basis.iter().enumerate() {
            let mut row = vec![q(0); self.unknowns * n];
            for (j, &c) in coefs.iter().enumerate() {
                for l in 0..n {
                    row[j * n + l] = &phi[l] * q(c);
                }
            }
            self.sys.eq.push((row, target[k].clone()));
        }
    }

    pub fn min_len(&mut self, unknown: usize, len: i64) {
        let n = self.inv.nletters;
        let mut row = vec![q(0); self.unknowns * n];
        for l in 0..n {
            row[unknown * n + l] = q(1);
        }
        self.sys.ge.push((row, q(len)));
    }

    pub fn force_letter(&mut self, unknown: usize, letter: usize) {
        let n = self.inv.nletters;
        let mut row = vec![q(0); self.unknowns * n];
        row[unknown * n + letter] = q(1);
        self.sys.ge.push((row, q(1)));
    }

    pub fn feasible(&self) -> bool {
        self.sys.solve().is_some()
    }

    /// Letters that may occur in `unknown` in some solution.
    pub fn allowed_letters(&self, unknown: usize) -> Vec<bool> {
        (0..self.inv.nletters)
            .map(|l| {
                let mut sys = self.sys.clone();
                let mut row = vec![q(0); self.unknowns * self.inv.nletters];
                row[unknown * self.inv.nletters + l] = q(1);
                sys.ge.push((row, q(1)));
                sys.solve().is_some()
            })
            .collect()
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cat(parts: &[&[Letter]]) -> Vec<Letter> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Outcome of the transversality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Transversality {
    /// Transverse, with the witness `y` (possibly empty).
    Yes(#[serde(skip)] Vec<Letter>),
    No,
    Unknown,
}

/// Words over the alphabet in ShortLex order, from the empty word up to `max_len`.
pub fn shortlex_words(n: usize, max_len: usize) -> impl Iterator<Item = Vec<Letter>> {
    (0..=max_len).flat_map(move |len| {
        let total = n.checked_pow(len as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut k| {
            let mut w = vec![Letter(0); len];
            for i in (0..len).rev() {
                w[i] = Letter((k % n) as u32);
                k /= n;
            }
            w
        })
    })
}

/// True when no `y` can satisfy both `t₁ = pre·mid₁·y` and `t₂ = y·mid₂·post`.
fn refute_condition(
    inv: &Invariants,
    oracle: &WordOracle,
    lhs1: (&[Letter], &[Letter], &[Letter]),
    lhs2: (&[Letter], &[Letter], &[Letter]),
) -> bool {
    let (t1, pre, mid1) = lhs1;
    let (t2, mid2, post) = lhs2;
    if t1.is_empty() || t2.is_empty() {
        return true;
    }
    let p = oracle.presentation();
    let mut lp = CountLp::new(inv, 1);
    lp.equal(&[1], sub(&inv.eval(t1), &inv.eval(&cat(&[pre, mid1]))));
    lp.equal(&[1], sub(&inv.eval(t2), &inv.eval(&cat(&[mid2, post]))));
    if !lp.feasible() {
        return true;
    }
    // the fixed ends of the two products must be possible ends of the targets
    let fixed1 = cat(&[pre, mid1]);
    let fixed2 = cat(&[mid2, post]);
    let (first1, last2) = (fixed1[0], fixed2[fixed2.len() - 1]);
    if !boundary_letters(t1, p, true).contains(&first1) || !boundary_letters(t2, p, false).contains(&last2) {
        return true;
    }
    let allowed = lp.allowed_letters(0);
    if !allowed.iter().any(|&a| a) {
        let ok1 = oracle.equal(t1, &fixed1);
        let ok2 = oracle.equal(t2, &fixed2);
        return ok1 == Equality::Distinct || ok2 == Equality::Distinct;
    }
    false
}

/// Whether hyperplanes `[a, u→v, b]` and `[c, p→q, d]` cross: some `y` with
/// `c = auy`, `b = ypd`, or `d = yub`, `a = cpy` (modulo the presentation).
pub fn hyperplanes_transverse(h1: &HyperplaneLabel, h2: &HyperplaneLabel, oracle: &WordOracle) -> Transversality {
    if h1 == h2 {
        return Transversality::No;
    }
    let p = oracle.presentation();
    let inv = Invariants::new(p);
    let (a, b) = (&h1.left[..], &h1.right[..]);
    let (c, d) = (&h2.left[..], &h2.right[..]);
    let u = &p.relation(h1.relation).left[..];
    let pp = &p.relation(h2.relation).left[..];
    // condition 1: c = a u y, b = y p d
    let no1 = refute_condition(&inv, oracle, (c, a, u), (b, pp, d));
    // condition 2: d = y u b, a = c p y
    let no2 = refute_condition(&inv, oracle, (a, c, pp), (d, u, b));
    if no1 && no2 {
        return Transversality::No;
    }
    for y in shortlex_words(p.alphabet_size(), oracle.budget().max_witness_len) {
        if !no1 {
            let e1 = oracle.equal(c, &cat(&[a, u, &y]));
            let e2 = oracle.equal(b, &cat(&[&y, pp, d]));
            if e1 == Equality::Equal && e2 == Equality::Equal {
                return Transversality::Yes(y);
            }
        }
        if !no2 {
            let e1 = oracle.equal(d, &cat(&[&y, u, b]));
            let e2 = oracle.equal(a, &cat(&[c, pp, &y]));
            if e1 == Equality::Equal && e2 == Equality::Equal {
                return Transversality::Yes(y);
            }
        }
    }
    Transversality::Unknown
}

/// Adjacency matrix of the crossing graph on `labels`, or `None` if some
/// pair is undecided.
pub fn crossing_graph(labels: &[HyperplaneLabel], oracle: &WordOracle) -> Option<Vec<Vec<bool>>> {
    let n = labels.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match hyperplanes_transverse(&labels[i], &labels[j], oracle) {
                Transversality::Yes(_) => {
                    m[i][j] = true;
                    m[j][i] = true;
                }
                Transversality::No => {}
                Transversality::Unknown => return None,
            }
        }
    }
    Some(m)
}

/// A violation of one of the two conspiciality conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConspicialWitness {
    /// `w = ab`, `a = ap`, `b = pb` with `[p] ≠ {p}`.
    Osculation {
        #[serde(skip)]
        a: Vec<Letter>,
        #[serde(skip)]
        b: Vec<Letter>,
        #[serde(skip)]
        p: Vec<Letter>,
    },
    /// `w = a·uvw'·b`, `au = auvξ`, `w'b = ξvw'b` with `uv`, `vw'` relation sides.
    Overlap {
        #[serde(skip)]
        a: Vec<Letter>,
        #[serde(skip)]
        u: Vec<Letter>,
        #[serde(skip)]
        v: Vec<Letter>,
        #[serde(skip)]
        w: Vec<Letter>,
        #[serde(skip)]
        b: Vec<Letter>,
        #[serde(skip)]
        xi: Vec<Letter>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Conspiciality {
    Conspicial,
    NotConspicial(ConspicialWitness),
    Unknown,
}

/// Candidate `(u, v, w')` with `uv` and `vw'` relation sides, all non-empty.
fn overlap_candidates(p: &Presentation) -> Vec<(Vec<Letter>, Vec<Letter>, Vec<Letter>)> {
    let sides: Vec<&Word> = p.relations().iter().flat_map(|r| [&r.left, &r.right]).collect();
    let mut out = BTreeSet::new();
    for s1 in &sides {
        for s2 in &sides {
            for k in 1..s1.len().min(s2.len() + 1) {
                if k >= s1.len() || k >= s2.len() {
                    continue;
                }
                if s1[s1.len() - k..] == s2[..k] {
                    out.insert((s1[..s1.len() - k].to_vec(), s2[..k].to_vec(), s2[k..].to_vec()));
                }
            }
        }
    }
    out.into_iter().collect()
}

fn condition1_refuted(p: &Presentation, inv: &Invariants) -> bool {
    let zero = inv.zero_letters();
    let in_zero = |w: &Word| w.iter().all(|l| zero[l.rank()]);
    !p.relations().iter().any(|r| in_zero(&r.left) || in_zero(&r.right))
}

fn condition2_refuted(
    w: &[Letter],
    cand: &(Vec<Letter>, Vec<Letter>, Vec<Letter>),
    p: &Presentation,
    inv: &Invariants,
) -> bool {
    let (u, v, w2) = cand;
    // unknowns: 0 = a, 1 = b, 2 = ξ
    let mut lp = CountLp::new(inv, 3);
    let core = cat(&[u, v, w2]);
    lp.equal(&[1, 1, 0], sub(&inv.eval(w), &inv.eval(&core)));
    let neg_v: Vec<Q> = inv.eval(v).into_iter().map(|x| -x).collect();
    lp.equal(&[0, 0, 1], neg_v);
    for k in 0..3 {
        lp.min_len(k, 1);
    }
    if !lp.feasible() {
        return true;
    }
    let first = boundary_letters(w, p, true);
    let last = boundary_letters(w, p, false);
    let allowed_a = lp.allowed_letters(0);
    let allowed_b = lp.allowed_letters(1);
    let a_ok = first.iter().any(|l| allowed_a[l.rank()]);
    let b_ok = last.iter().any(|l| allowed_b[l.rank()]);
    !(a_ok && b_ok)
}

fn nonempty_words(n: usize, max_len: usize) -> impl Iterator<Item = Vec<Letter>> {
    shortlex_words(n, max_len).filter(|w| !w.is_empty())
}

/// Classes up to this size are recognised as finite (and hence conspicial)
/// by enumeration; larger ones go through the refutation tests.
const FINITE_CLASS_CHECK: usize = 1000;

/// Checks both conspiciality conditions for `S⁺(P, w)`.
pub fn check_conspicial(w: &[Letter], oracle: &WordOracle) -> Conspiciality {
    let p = oracle.presentation().clone();
    let budget = *oracle.budget();
    if crate::rewriting::bfs_class(w, &p, budget.max_words.min(FINITE_CLASS_CHECK)).complete {
        return Conspiciality::Conspicial;
    }
    let inv = Invariants::new(&p);
    let n = p.alphabet_size();
    let len = budget.max_witness_len;
    let mut work = 0usize;

    let c1 = condition1_refuted(&p, &inv);
    if !c1 {
        'outer: for a in nonempty_words(n, len) {
            for b in nonempty_words(n, len) {
                work += 1;
                if work > budget.max_words {
                    break 'outer;
                }
                if oracle.equal(w, &cat(&[&a, &b])) != Equality::Equal {
                    continue;
                }
                for pw in nonempty_words(n, len) {
                    work += 1;
                    if rewrite_step(&pw, &p, Direction::Both).is_empty() {
                        continue;
                    }
                    if oracle.equal(&a, &cat(&[&a, &pw])) == Equality::Equal
                        && oracle.equal(&b, &cat(&[&pw, &b])) == Equality::Equal
                    {
                        return Conspiciality::NotConspicial(ConspicialWitness::Osculation { a, b, p: pw });
                    }
                }
            }
        }
    }
    let candidates: Vec<_> = overlap_candidates(&p).into_iter().filter(|c| !condition2_refuted(w, c, &p, &inv)).collect();
    if c1 && candidates.is_empty() {
        return Conspiciality::Conspicial;
    }
    for (u, v, w2) in &candidates {
        for xi in nonempty_words(n, len) {
            let vxi = cat(&[v, &xi]);
            let xiv = cat(&[&xi, v]);
            for a in nonempty_words(n, len) {
                work += 1;
                if work > budget.max_words * 4 {
                    return Conspiciality::Unknown;
                }
                let au = cat(&[&a, u]);
                if oracle.equal(&au, &cat(&[&au, &vxi])) != Equality::Equal {
                    continue;
                }
                for b in nonempty_words(n, len) {
                    let wb = cat(&[w2, &b]);
                    if oracle.equal(&wb, &cat(&[&xiv, &wb])) == Equality::Equal
                        && oracle.equal(w, &cat(&[&a, u, v, w2, &b])) == Equality::Equal
                    {
                        return Conspiciality::NotConspicial(ConspicialWitness::Overlap {
                            a,
                            u: u.clone(),
                            v: v.clone(),
                            w: w2.clone(),
                            b,
                            xi,
                        });
                    }
                }
            }
        }
    }
    Conspiciality::Unknown
}


/// Hyperplane labels of the component together with the component itself.
pub fn component_hyperplanes(w: &[Letter], oracle: &WordOracle) -> (SquierComponent, Vec<HyperplaneLabel>) {
    let comp = enumerate_class(w, oracle.presentation(), oracle.budget());
    let (labels, _) = hyperplanes(w, oracle);
    (comp, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use crate::constructions::{bullet_product, cyclic, planar_braid, thompson};
    use crate::presentation::parse_presentation;

    fn pres(src: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation(src).unwrap().presentation)
    }

    #[test]
    fn labels_of_an_infinite_class() {
        let b = bullet_product(&cyclic(), &cyclic()).unwrap();
        let o = WordOracle::new(Arc::new(b.presentation.clone()), &Budget::default());
        let (labels, certain) = hyperplanes(&b.baseword, &o);
        assert!(certain);
        assert_eq!(labels.len(), 8);
    }

    #[test]
    fn three_cycle_component() {
        let p = pres("letters a b c\nrule a = b\nrule b = c\nrule c = a\n");
        let c = enumerate_class(&p.parse_letters("a").unwrap(), &p, &Budget::default());
        assert_eq!((c.words.len(), c.edges.len(), c.squares.len()), (3, 3, 0));
        assert!(c.complete);
        assert_eq!(c.first_homology_rank(), 1);
    }

    #[test]
    fn five_vertex_component() {
        let p = pres("letters a b c x y\nrule a = b\nrule x = y\nrule c = a x\nrule c = b x\n");
        let c = enumerate_class(&p.parse_letters("c").unwrap(), &p, &Budget::default());
        assert_eq!((c.words.len(), c.edges.len(), c.squares.len()), (5, 6, 1));
        assert_eq!(c.first_homology_rank(), 1);
    }

    #[test]
    fn thompson_class_is_truncated() {
        let p = pres("letters x\nrule x = x x\n");
        let budget = Budget { max_words: 40, ..Budget::small() };
        let c = enumerate_class(&p.parse_letters("x").unwrap(), &p, &budget);
        assert!(!c.complete);
        assert_eq!(c.words.len(), 40);
    }

    #[test]
    fn bullet_hyperplanes_form_k44() {
        let bp = bullet_product(&cyclic(), &cyclic()).unwrap();
        let p = Arc::new(bp.presentation.clone());
        let oracle = WordOracle::new(p.clone(), &Budget::small());
        let (labels, _) = hyperplanes(&bp.baseword, &oracle);
        assert_eq!(labels.len(), 8, "{:?}", labels.iter().map(|l| l.render(&p)).collect::<Vec<_>>());
        let m = crossing_graph(&labels, &oracle).expect("decided");
        let degrees: Vec<usize> = m.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
        assert!(degrees.iter().all(|&d| d == 4), "{degrees:?}");
        assert_eq!(check_conspicial(&bp.baseword, &oracle), Conspiciality::Conspicial);
    }

    #[test]
    fn conspicial_examples() {
        let b = planar_braid(3).unwrap();
        let o = WordOracle::new(Arc::new(b.presentation.clone()), &Budget::small());
        assert_eq!(check_conspicial(&b.baseword, &o), Conspiciality::Conspicial);
        let t = thompson();
        let p = Arc::new(t.presentation.clone());
        let o = WordOracle::new(p.clone(), &Budget::small());
        let x = p.parse_letters("x").unwrap();
        assert_eq!(
            check_conspicial(&t.baseword, &o),
            Conspiciality::NotConspicial(ConspicialWitness::Osculation { a: x.clone(), b: x.clone(), p: x })
        );
    }

    #[test]
    fn shortlex_enumeration_order() {
        let ws: Vec<Vec<Letter>> = shortlex_words(2, 2).collect();
        assert_eq!(ws.len(), 7);
        assert!(ws[0].is_empty());
        assert_eq!(ws[3], vec![Letter(0), Letter(0)]);
    }
}
