//! Directed 2-complexes over a presentation, the wedge of spheres spanned by
//! a finite set of spherical diagrams, folding, and membership in the closure
//! of the generated subgroup.
//!
//! Every 2-cell is stored once per involution pair: `left` is the path read
//! by the left side of its relation and `right` the path read by the right
//! side. The oriented cell `f` has top `left` and bottom `right`, and `ι(f)`
//! has them swapped.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::Diagram;
use crate::error::DiagramError;
use crate::presentation::{Letter, Presentation, Sign, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub letter: Letter,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoCell {
    pub relation: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl TwoCell {
    fn side(&self, sign: Sign) -> &[usize] {
        match sign {
            Sign::Pos => &self.left,
            Sign::Neg => &self.right,
        }
    }
}

/// An oriented 2-cell: one member of an involution pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCell {
    pub pair: usize,
    pub sign: Sign,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Directed2Complex {
    presentation: Arc<Presentation>,
    vertices: usize,
    edges: Vec<Edge>,
    cells: Vec<TwoCell>,
    /// The distinguished 1-path.
    base: Vec<usize>,
}

/// Images of vertices, edges and cell pairs in the ambient complex `X(P)`,
/// whose edges are indexed by letter and whose cell pairs by relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledMap {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub cells: Vec<usize>,
}

impl Directed2Complex {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cell pairs; the complex has twice as many oriented cells.
    pub fn cell_pairs(&self) -> &[TwoCell] {
        &self.cells
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn oriented_cells(&self) -> Vec<OrientedCell> {
        let mut out = Vec::with_capacity(2 * self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            out.push(OrientedCell { pair: i, sign: Sign::Pos, top: c.left.clone(), bottom: c.right.clone() });
            out.push(OrientedCell { pair: i, sign: Sign::Neg, top: c.right.clone(), bottom: c.left.clone() });
        }
        out
    }

    /// The involution on oriented cells, as an index permutation of
    /// [`oriented_cells`](Self::oriented_cells).
    pub fn involution(&self) -> Vec<usize> {
        (0..2 * self.cells.len()).map(|i| i ^ 1).collect()
    }

    pub fn path_label(&self, path: &[usize]) -> Vec<Letter> {
        path.iter().map(|&e| self.edges[e].letter).collect()
    }

    fn is_path(&self, path: &[usize]) -> bool {
        !path.is_empty() && path.windows(2).all(|w| self.edges[w[0]].to == self.edges[w[1]].from)
    }

    /// Checks that every cell's paths are well formed, share endpoints and
    /// read the two sides of its relation, and that the involution is a
    /// fixed-point-free involution exchanging top and bottom.
    pub fn check(&self) -> bool {
        let cells = self.oriented_cells();
        let iota = self.involution();
        let involutive = iota.iter().enumerate().all(|(i, &j)| j != i && iota[j] == i && cells[j].top == cells[i].bottom);
        let shapes = self.cells.iter().all(|c| {
            let r = self.presentation.relation(c.relation);
            self.is_path(&c.left)
                && self.is_path(&c.right)
                && self.edges[c.left[0]].from == self.edges[c.right[0]].from
                && self.edges[*c.left.last().unwrap()].to == self.edges[*c.right.last().unwrap()].to
                && self.path_label(&c.left) == r.left.letters()
                && self.path_label(&c.right) == r.right.letters()
        });
        involutive && shapes && (self.base.is_empty() || self.is_path(&self.base))
    }

    pub fn map_to_ambient(&self) -> LabelledMap {
        LabelledMap {
            vertices: vec![0; self.vertices],
            edges: self.edges.iter().map(|e| e.letter.rank()).collect(),
            cells: self.cells.iter().map(|c| c.relation).collect(),
        }
    }

    /// Whether no two distinct oriented cells with the same image share a
    /// top path (sharing a bottom path is the same condition for ι-partners).
    pub fn is_locally_injective(&self) -> bool {
        let mut seen = HashMap::new();
        self.cells.iter().enumerate().all(|(i, c)| {
            [Sign::Pos, Sign::Neg].iter().all(|&s| *seen.entry((c.relation, s, c.side(s).to_vec())).or_insert(i) == i)
        })
    }

    pub fn to_dot(&self) -> String {
        let p = &self.presentation;
        let mut out = String::from("digraph complex {\n  rankdir=LR;\n");
        for v in 0..self.vertices {
            let _ = writeln!(out, "  v{v} [shape=point];");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let style = if self.base.contains(&i) { ", penwidth=2" } else { "" };
            let _ = writeln!(out, "  v{} -> v{} [label=\"e{i}:{}\"{style}];", e.from, e.to, p.symbol(e.letter));
        }
        for (i, c) in self.cells.iter().enumerate() {
            let path = |ps: &[usize]| ps.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(" ");
            let r = p.relation(c.relation);
            let _ = writeln!(
                out,
                "  c{i} [shape=box, label=\"{} = {}\\n{} | {}\"];",
                p.render(&r.left),
                p.render(&r.right),
                path(&c.left),
                path(&c.right)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// `X(P)`: one vertex, one loop per letter, one cell pair per relation.
pub fn build_ambient(p: &Arc<Presentation>) -> Directed2Complex {
    let edges = p.letters().map(|l| Edge { from: 0, to: 0, letter: l }).collect();
    let cells = p
        .relations()
        .iter()
        .enumerate()
        .map(|(i, r)| TwoCell {
            relation: i,
            left: r.left.iter().map(|l| l.rank()).collect(),
            right: r.right.iter().map(|l| l.rank()).collect(),
        })
        .collect();
    Directed2Complex { presentation: p.clone(), vertices: 1, edges, cells, base: Vec::new() }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn push(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Merges the classes, keeping the smaller root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.0[hi] = lo;
        true
    }
}

/// A complex under construction, with vertex and edge identifications
/// pending until [`finish`](Builder::finish).
struct Builder {
    presentation: Arc<Presentation>,
    vertices: UnionFind,
    edges: Vec<Edge>,
    edge_uf: UnionFind,
    cells: Vec<TwoCell>,
    alive: Vec<bool>,
    base: Vec<usize>,
}

impl Builder {
    fn from_complex(x: &Directed2Complex) -> Builder {
        Builder {
            presentation: x.presentation.clone(),
            vertices: UnionFind::new(x.vertices),
            edges: x.edges.clone(),
            edge_uf: UnionFind::new(x.edges.len()),
            cells: x.cells.clone(),
            alive: vec![true; x.cells.len()],
            base: x.base.clone(),
        }
    }

    fn add_path(&mut self, from: usize, to: usize, letters: &[Letter]) -> Vec<usize> {
        let mut cur = from;
        letters
            .iter()
            .enumerate()
            .map(|(i, &letter)| {
                let next = if i + 1 == letters.len() { to } else { self.vertices.push() };
                self.edges.push(Edge { from: cur, to: next, letter });
                cur = next;
                self.edge_uf.push()
            })
            .collect()
    }

    fn identify_edges(&mut self, a: usize, b: usize) {
        if self.edge_uf.union(a, b) {
            let (ea, eb) = (self.edges[a], self.edges[b]);
            self.vertices.union(ea.from, eb.from);
            self.vertices.union(ea.to, eb.to);
        }
    }

    fn identify_paths(&mut self, a: &[usize], b: &[usize]) {
        for (&x, &y) in a.iter().zip(b) {
            self.identify_edges(x, y);
        }
    }

    fn canonical(&mut self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&e| self.edge_uf.find(e)).collect()
    }

    /// One pass over the cells in `order`, folding every cell pair whose
    /// `sign` side coincides with an earlier one of the same relation.
    fn fold_pass(&mut self, order: &[usize], sign: Sign) -> bool {
        let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut changed = false;
        for &c in order {
            if !self.alive[c] {
                continue;
            }
            let side = self.cells[c].side(sign).to_vec();
            let key = (self.cells[c].relation, self.canonical(&side));
            match seen.get(&key) {
                Some(&d) => {
                    let (a, b) = (self.cells[c].side(sign.flip()).to_vec(), self.cells[d].side(sign.flip()).to_vec());
                    self.identify_paths(&a, &b);
                    self.alive[c] = false;
                    changed = true;
                }
                None => {
                    seen.insert(key, c);
                }
            }
        }
        changed
    }

    /// Folds until no pass changes anything. `shuffle` reorders the cells
    /// visited in each pass.
    fn fold(&mut self, mut shuffle: impl FnMut(&mut Vec<usize>)) {
        loop {
            let mut order: Vec<usize> = (0..self.cells.len()).filter(|&c| self.alive[c]).collect();
            shuffle(&mut order);
            let top = self.fold_pass(&order, Sign::Pos);
            let bottom = self.fold_pass(&order, Sign::Neg);
            if !top && !bottom {
                break;
            }
        }
    }

    /// Renumbers surviving vertices, edges and cells in order of first use.
    fn finish(mut self) -> Directed2Complex {
        let mut vmap = HashMap::new();
        let mut emap = HashMap::new();
        let mut edges = Vec::new();
        for e in 0..self.edges.len() {
            let root = self.edge_uf.find(e);
            if emap.contains_key(&root) {
                continue;
            }
            let Edge { from, to, letter } = self.edges[root];
            let mut vid = |v: usize, uf: &mut UnionFind| {
                let r = uf.find(v);
                let n = vmap.len();
                *vmap.entry(r).or_insert(n)
            };
            let from = vid(from, &mut self.vertices);
            let to = vid(to, &mut self.vertices);
            emap.insert(root, edges.len());
            edges.push(Edge { from, to, letter });
        }
        let remap = |path: &[usize], uf: &mut UnionFind| -> Vec<usize> { path.iter().map(|&e| emap[&uf.find(e)]).collect() };
        let base = remap(&self.base, &mut self.edge_uf);
        let cells = self
            .cells
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(c, _)| TwoCell {
                relation: c.relation,
                left: remap(&c.left, &mut self.edge_uf),
                right: remap(&c.right, &mut self.edge_uf),
            })
            .collect();
        Directed2Complex { presentation: self.presentation, vertices: vmap.len().max(1), edges, cells, base }
    }
}

/// The bouquet of spheres of `gens`, glued along one segment labelled `w`.
pub fn wedge_of_generators(p: &Arc<Presentation>, w: &Word, gens: &[Diagram]) -> Result<Directed2Complex, DiagramError> {
    if gens.iter().any(|g| !Arc::ptr_eq(g.presentation(), p) && **g.presentation() != **p) {
        return Err(DiagramError::PresentationMismatch);
    }
    if gens.iter().any(|g| g.top() != w || g.bottom() != w) {
        return Err(DiagramError::BasewordMismatch);
    }
    let mut b = Builder {
        presentation: p.clone(),
        vertices: UnionFind::new(w.len() + 1),
        edges: Vec::new(),
        edge_uf: UnionFind::new(0),
        cells: Vec::new(),
        alive: Vec::new(),
        base: Vec::new(),
    };
    for (i, &letter) in w.iter().enumerate() {
        b.edges.push(Edge { from: i, to: i + 1, letter });
        b.base.push(b.edge_uf.push());
    }
    for g in gens {
        let mut path = b.base.clone();
        for c in g.cells() {
            let r = p.relation(c.relation);
            let (pattern, image) = (r.pattern(c.sign), r.image(c.sign));
            let sub = path[c.offset..c.offset + pattern.len()].to_vec();
            let (from, to) = (b.edges[sub[0]].from, b.edges[*sub.last().unwrap()].to);
            let new = b.add_path(from, to, image);
            let (left, right) = match c.sign {
                Sign::Pos => (sub, new.clone()),
                Sign::Neg => (new.clone(), sub),
            };
            b.cells.push(TwoCell { relation: c.relation, left, right });
            b.alive.push(true);
            path.splice(c.offset..c.offset + pattern.len(), new);
        }
        let base = b.base.clone();
        b.identify_paths(&path, &base);
    }
    Ok(b.finish())
}

/// Folds until the map to `X(P)` is locally injective.
pub fn fold(x: &Directed2Complex) -> Directed2Complex {
    let mut b = Builder::from_complex(x);
    b.fold(|_| {});
    b.finish()
}

/// [`fold`] visiting cells in a random order in every pass.
pub fn fold_randomized<R: Rng>(x: &Directed2Complex, rng: &mut R) -> Directed2Complex {
    let mut b = Builder::from_complex(x);
    b.fold(|order| order.shuffle(rng));
    b.finish()
}

/// The folded complex whose accepted diagrams form `Cl(⟨gens⟩)`.
pub fn closure_complex(p: &Arc<Presentation>, w: &Word, gens: &[Diagram]) -> Result<Directed2Complex, DiagramError> {
    Ok(fold(&wedge_of_generators(p, w, gens)?))
}

/// Whether the cells of `d` lift one by one to `x`, starting and ending on
/// the distinguished path. Meant for folded complexes, where each lift is
/// forced.
pub fn accepts(x: &Directed2Complex, d: &Diagram) -> bool {
    if !d.is_spherical() || x.path_label(&x.base) != d.top().letters() {
        return false;
    }
    let mut index: HashMap<(usize, Sign, &[usize]), usize> = HashMap::new();
    for (i, c) in x.cells.iter().enumerate() {
        index.entry((c.relation, Sign::Pos, &c.left[..])).or_insert(i);
        index.entry((c.relation, Sign::Neg, &c.right[..])).or_insert(i);
    }
    let mut path = x.base.clone();
    for c in d.cells() {
        let len = x.presentation.relation(c.relation).pattern(c.sign).len();
        let Some(sub) = path.get(c.offset..c.offset + len) else { return false };
        let Some(&k) = index.get(&(c.relation, c.sign, sub)) else { return false };
        let image = x.cells[k].side(c.sign.flip()).to_vec();
        path.splice(c.offset..c.offset + len, image);
    }
    path == x.base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Cell;
    use crate::presentation::parse_presentation;

    fn pres(src: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation(src).unwrap().presentation)
    }

    fn thompson() -> Arc<Presentation> {
        pres("letters x\nrule x = x x\n")
    }

    fn x0(p: &Arc<Presentation>) -> Diagram {
        let cells = [Cell::new(0, 0, Sign::Pos), Cell::new(0, 0, Sign::Pos), Cell::new(1, 0, Sign::Neg), Cell::new(0, 0, Sign::Neg)];
        Diagram::from_cells(p.clone(), p.parse_word("x").unwrap(), &cells).unwrap()
    }

    #[test]
    fn ambient_complexes() {
        let x = build_ambient(&thompson());
        assert_eq!((x.vertex_count(), x.edges().len(), 2 * x.cell_pairs().len()), (1, 1, 2));
        assert!(x.check());
        let y = build_ambient(&pres("letters a b c\nrule a = b\nrule b = c\nrule c = a\n"));
        assert_eq!((y.edges().len(), 2 * y.cell_pairs().len()), (3, 6));
        assert!(y.check());
    }

    #[test]
    fn wedge_shapes() {
        let p = thompson();
        let w = p.parse_word("x").unwrap();
        let bare = wedge_of_generators(&p, &w, &[]).unwrap();
        assert_eq!((bare.vertex_count(), bare.edges().len(), bare.cell_pairs().len()), (2, 1, 0));
        let g = x0(&p);
        let s = wedge_of_generators(&p, &w, std::slice::from_ref(&g)).unwrap();
        assert!(s.check());
        assert_eq!(s.cell_pairs().len(), 4);
        assert!(accepts(&fold(&s), &g));
        let twice = fold(&wedge_of_generators(&p, &w, &[g.clone(), g.clone()]).unwrap());
        let once = fold(&s);
        assert_eq!((twice.vertex_count(), twice.edges().len(), twice.cell_pairs().len()), (once.vertex_count(), once.edges().len(), once.cell_pairs().len()));
        assert!(twice.is_locally_injective());
        let again = fold(&once);
        assert_eq!((again.edges().len(), again.cell_pairs().len()), (once.edges().len(), once.cell_pairs().len()));
    }

    #[test]
    fn sum_generator_closure_contains_summands() {
        let p = pres("letters a b\nrule a = b\n");
        let a = p.parse_word("a").unwrap();
        let loop_a = Diagram::from_cells(p.clone(), a.clone(), &[Cell::new(0, 0, Sign::Pos), Cell::new(0, 0, Sign::Neg)]).unwrap();
        assert!(loop_a.is_empty());
        let t = thompson();
        let x = t.parse_word("x").unwrap();
        let g = x0(&t);
        let sum = g.sum(&g).unwrap();
        let xx = t.parse_word("x x").unwrap();
        let cl = closure_complex(&t, &xx, std::slice::from_ref(&sum)).unwrap();
        let id = Diagram::identity(t.clone(), x.clone());
        assert!(accepts(&cl, &sum));
        assert!(accepts(&cl, &g.sum(&id).unwrap()));
        assert!(accepts(&cl, &id.sum(&g).unwrap()));
    }
}
