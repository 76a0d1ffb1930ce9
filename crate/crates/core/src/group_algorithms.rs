//! Decision procedures in diagram groups: word problem, cyclic shifts,
//! absolutely reduced forms, conjugacy, the α-map, roots and power-sum forms.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::budget::Budget;
use crate::diagram::{Diagram, Ideal};
use crate::error::DiagramError;
use crate::presentation::{Letter, Sign, Word};
use crate::rewriting::{Equality, WordOracle};
use crate::sampling::derivation_diagram;

fn check_pair(a: &Diagram, b: &Diagram) -> Result<(), DiagramError> {
    if !a.is_spherical() || !b.is_spherical() || a.top() != b.top() {
        return Err(DiagramError::BasewordMismatch);
    }
    if a.presentation() != b.presentation() {
        return Err(DiagramError::PresentationMismatch);
    }
    Ok(())
}

pub fn is_trivial(d: &Diagram) -> bool {
    d.is_empty()
}

pub fn equals(a: &Diagram, b: &Diagram) -> Result<bool, DiagramError> {
    check_pair(a, b)?;
    Ok(a == b)
}

pub fn commutes(a: &Diagram, b: &Diagram) -> Result<bool, DiagramError> {
    check_pair(a, b)?;
    Ok(a.concat(b)? == b.concat(a)?)
}

/// `a ∘ b ∘ a⁻¹`.
pub fn conjugate_by(a: &Diagram, b: &Diagram) -> Result<Diagram, DiagramError> {
    a.concat(b)?.concat(&a.inverse())
}

/// The shift `Δ₂ ∘ Δ₁` of `Δ = Δ₁ ∘ Δ₂` along `ideal`, with `Δ₁`.
fn shift_along(d: &Diagram, ideal: Ideal) -> Result<(Diagram, Diagram), DiagramError> {
    let (first, second) = d.split(ideal);
    Ok((second.concat(&first)?, first))
}

/// All one-step cyclic shifts of a spherical diagram, including itself.
pub fn cyclic_shifts(d: &Diagram, budget: &Budget) -> Result<Vec<Diagram>, DiagramError> {
    if !d.is_spherical() {
        return Err(DiagramError::BasewordMismatch);
    }
    let mut out: Vec<Diagram> = Vec::new();
    for ideal in d.ideals(budget.max_frontier)? {
        let (s, _) = shift_along(d, ideal)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Everything reachable by repeated cyclic shifts, with conjugators:
/// `root = conjugators[i] ∘ members[i] ∘ conjugators[i]⁻¹`.
#[derive(Clone, Debug)]
pub struct ShiftClosure {
    pub members: Vec<Diagram>,
    pub conjugators: Vec<Diagram>,
    /// False when the frontier budget was hit.
    pub complete: bool,
}

impl ShiftClosure {
    pub fn position(&self, d: &Diagram) -> Option<usize> {
        self.members.iter().position(|m| m == d)
    }
}

/// Breadth-first shifts of `d`, keeping only members accepted by `keep`,
/// until `stop` holds.
fn closure_search(
    d: &Diagram,
    budget: &Budget,
    keep: &dyn Fn(&Diagram) -> bool,
    stop: &dyn Fn(&Diagram) -> bool,
) -> (ShiftClosure, Option<usize>) {
    let p = d.presentation().clone();
    let mut members = vec![d.clone()];
    let mut conjugators = vec![Diagram::identity(p, d.top().clone())];
    let mut index: HashMap<Diagram, usize> = HashMap::from([(d.clone(), 0)]);
    if stop(d) {
        return (ShiftClosure { members, conjugators, complete: false }, Some(0));
    }
    let mut head = 0;
    let mut complete = true;
    while head < members.len() {
        let cur = members[head].clone();
        let conj = conjugators[head].clone();
        head += 1;
        let Ok(ideals) = cur.ideals(budget.max_frontier) else {
            complete = false;
            continue;
        };
        for ideal in ideals {
            let Ok((s, first)) = shift_along(&cur, ideal) else { continue };
            if index.contains_key(&s) || !keep(&s) {
                continue;
            }
            if members.len() >= budget.max_frontier {
                return (ShiftClosure { members, conjugators, complete: false }, None);
            }
            let c = conj.concat(&first).expect("conjugators compose");
            index.insert(s.clone(), members.len());
            members.push(s.clone());
            conjugators.push(c);
            if stop(&s) {
                let hit = members.len() - 1;
                return (ShiftClosure { members, conjugators, complete: false }, Some(hit));
            }
        }
    }
    (ShiftClosure { members, conjugators, complete }, None)
}

/// `Shift(Δ)` explored breadth first under the frontier budget.
pub fn shift_closure(d: &Diagram, budget: &Budget) -> Result<ShiftClosure, DiagramError> {
    if !d.is_spherical() {
        return Err(DiagramError::BasewordMismatch);
    }
    Ok(closure_search(d, budget, &|_| true, &|_| false).0)
}

/// The part of `Shift(Δ)` reachable through simple diagrams only. For a simple
/// `Δ` this set is finite: every top edge of a simple diagram with cells is
/// consumed by some cell.
pub fn simple_shift_closure(d: &Diagram, budget: &Budget) -> Result<ShiftClosure, DiagramError> {
    if !d.is_spherical() {
        return Err(DiagramError::BasewordMismatch);
    }
    Ok(closure_search(d, budget, &|s| s.is_simple(), &|_| false).0)
}

/// Whether `Δ ∘ Δ` is reduced.
pub fn square_is_reduced(d: &Diagram) -> bool {
    d.concat(d).map(|s| s.len() == 2 * d.len()).unwrap_or(false)
}

/// `Δ = Ψ ∘ core ∘ Ψ⁻¹` with `core ∘ core` reduced and, when `normal` holds,
/// every simple summand of `core` spherical.
#[derive(Clone, Debug)]
pub struct AbsolutelyReducedForm {
    pub conjugator: Diagram,
    pub core: Diagram,
    pub normal: bool,
}

pub fn absolutely_reduced_form(d: &Diagram, budget: &Budget) -> Result<AbsolutelyReducedForm, DiagramError> {
    if !d.is_spherical() {
        return Err(DiagramError::BasewordMismatch);
    }
    let mut conj = Diagram::identity(d.presentation().clone(), d.top().clone());
    let mut core = d.clone();
    'outer: loop {
        if core.is_empty() {
            return Ok(AbsolutelyReducedForm { conjugator: conj, core, normal: true });
        }
        if !square_is_reduced(&core) {
            let deps = core.dependencies();
            for (i, preds) in deps.iter().enumerate() {
                if !preds.is_empty() {
                    continue;
                }
                let (s, first) = shift_along(&core, 1u128 << i)?;
                if s.len() < core.len() {
                    conj = conj.concat(&first)?;
                    core = s;
                    continue 'outer;
                }
            }
            // No single minimal cell cancels; fall back to any shorter shift.
            let (closure, hit) = closure_search(&core, budget, &|_| true, &|s| s.len() < core.len());
            match hit {
                Some(i) => {
                    conj = conj.concat(&closure.conjugators[i])?;
                    core = closure.members[i].clone();
                    continue;
                }
                None => return Ok(AbsolutelyReducedForm { conjugator: conj, core, normal: false }),
            }
        }
        if core.is_normal() {
            return Ok(AbsolutelyReducedForm { conjugator: conj, core, normal: true });
        }
        let n = core.len();
        let (closure, hit) = closure_search(&core, budget, &|_| true, &|s| {
            s.len() < n || (s.is_normal() && square_is_reduced(s))
        });
        match hit {
            Some(i) => {
                conj = conj.concat(&closure.conjugators[i])?;
                core = closure.members[i].clone();
            }
            None => return Ok(AbsolutelyReducedForm { conjugator: conj, core, normal: false }),
        }
    }
}

/// Outcome of the conjugacy test. `Conjugate(Θ)` means `Δ₁ = Θ ∘ Δ₂ ∘ Θ⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugacy {
    Conjugate(Diagram),
    NotConjugate,
    Unknown,
}

/// A normal core cut into maximal trivial blocks and non-trivial simple summands.
enum Block {
    Trivial(Vec<Letter>),
    Simple(Diagram),
}

fn blocks(core: &Diagram) -> Vec<Block> {
    let mut out = Vec::new();
    let mut pending: Vec<Letter> = Vec::new();
    for c in core.sum_decompose().components {
        if c.is_empty() {
            pending.extend_from_slice(c.top());
        } else {
            out.push(Block::Trivial(std::mem::take(&mut pending)));
            out.push(Block::Simple(c));
        }
    }
    out.push(Block::Trivial(pending));
    out
}

pub fn conjugate(a: &Diagram, b: &Diagram, oracle: &WordOracle) -> Result<Conjugacy, DiagramError> {
    check_pair(a, b)?;
    let budget = oracle.budget();
    if a == b {
        return Ok(Conjugacy::Conjugate(Diagram::identity(a.presentation().clone(), a.top().clone())));
    }
    let fa = absolutely_reduced_form(a, budget)?;
    let fb = absolutely_reduced_form(b, budget)?;
    if !fa.normal || !fb.normal {
        return Ok(Conjugacy::Unknown);
    }
    if fa.core.len() != fb.core.len() {
        return Ok(Conjugacy::NotConjugate);
    }
    let (ba, bb) = (blocks(&fa.core), blocks(&fb.core));
    if ba.len() != bb.len() {
        return Ok(Conjugacy::NotConjugate);
    }
    let mut unknown = false;
    let mut thetas: Vec<Diagram> = Vec::new();
    for (x, y) in ba.iter().zip(&bb) {
        match (x, y) {
            (Block::Trivial(u), Block::Trivial(v)) => match oracle.equal(u, v) {
                Equality::Distinct => return Ok(Conjugacy::NotConjugate),
                Equality::Unknown => unknown = true,
                Equality::Equal if u.is_empty() => {}
                Equality::Equal => {
                    let uw = Word::new(u.clone()).expect("non-empty block");
                    match derivation_diagram(oracle, &uw, v) {
                        Some(t) => thetas.push(t),
                        None => unknown = true,
                    }
                }
            },
            (Block::Simple(d), Block::Simple(e)) => {
                if d.len() != e.len() {
                    return Ok(Conjugacy::NotConjugate);
                }
                let (closure, hit) = closure_search(d, budget, &|s| s.is_simple(), &|s| s == e);
                match hit {
                    Some(i) => thetas.push(closure.conjugators[i].clone()),
                    None if closure.complete => return Ok(Conjugacy::NotConjugate),
                    None => unknown = true,
                }
            }
            _ => unreachable!("blocks alternate"),
        }
    }
    if unknown {
        return Ok(Conjugacy::Unknown);
    }
    let theta = Diagram::sum_all(&thetas)?;
    let witness = fa.conjugator.concat(&theta)?.concat(&fb.conjugator.inverse())?;
    if conjugate_by(&witness, b)? == *a {
        Ok(Conjugacy::Conjugate(witness))
    } else {
        Ok(Conjugacy::Unknown)
    }
}

/// A finitely supported integer combination of triples
/// `(left class, relation, right class)`; the empty word stands for `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlphaVector(pub BTreeMap<(Vec<Letter>, usize, Vec<Letter>), i64>);

impl AlphaVector {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&mut self, key: (Vec<Letter>, usize, Vec<Letter>), by: i64) {
        let e = self.0.entry(key.clone()).or_insert(0);
        *e += by;
        if *e == 0 {
            self.0.remove(&key);
        }
    }

    pub fn plus(&self, other: &AlphaVector) -> AlphaVector {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.add(k.clone(), *v);
        }
        out
    }

    pub fn negate(&self) -> AlphaVector {
        AlphaVector(self.0.iter().map(|(k, v)| (k.clone(), -v)).collect())
    }
}

/// `α(Δ) = Σ η(π)` over the cells, or `None` if a class representative is
/// out of reach.
pub fn alpha(d: &Diagram, oracle: &WordOracle) -> Option<AlphaVector> {
    let words = d.words();
    let p = d.presentation();
    let mut out = AlphaVector::default();
    for (i, c) in d.cells().iter().enumerate() {
        let w = &words[i];
        let len = p.relation(c.relation).pattern(c.sign).len();
        let l = oracle.representative(&w[..c.offset])?;
        let r = oracle.representative(&w[c.offset + len..])?;
        out.add((l, c.relation, r), if c.sign == Sign::Pos { 1 } else { -1 });
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

/// Membership in the commutator subgroup: the kernel of `α`.
pub fn in_commutator_subgroup(d: &Diagram, oracle: &WordOracle) -> Membership {
    match alpha(d, oracle) {
        Some(a) if a.is_zero() => Membership::Yes,
        Some(_) => Membership::No,
        None => Membership::Unknown,
    }
}

/// Half the number of cells of the absolutely reduced core.
pub fn root_bound(d: &Diagram, budget: &Budget) -> Result<usize, DiagramError> {
    Ok(absolutely_reduced_form(d, budget)?.core.len() / 2)
}

#[derive(Clone, Debug)]
pub struct Roots {
    /// Pairs `(r, k)` with `r^k = Δ`, `k ≥ 2`.
    pub roots: Vec<(Diagram, i64)>,
    /// False when some search hit its budget.
    pub complete: bool,
}

/// A spherical `g` with `g^k = core`, taken as an order-ideal prefix.
fn prefix_root(core: &Diagram, k: usize, budget: &Budget) -> Result<Option<Diagram>, DiagramError> {
    let n = core.len();
    if k < 2 || !n.is_multiple_of(k) {
        return Ok(None);
    }
    for ideal in core.ideals_of_size(n / k, budget.max_frontier)? {
        let (first, _) = core.split(ideal);
        if first.is_spherical() && first.pow(k as i64)? == *core {
            return Ok(Some(first));
        }
    }
    Ok(None)
}

/// Searches exponents `2 ≤ k ≤ root_bound(Δ)` for roots `r` with `r^k = Δ`.
pub fn find_roots(d: &Diagram, budget: &Budget) -> Result<Roots, DiagramError> {
    let form = absolutely_reduced_form(d, budget)?;
    let bound = form.core.len() / 2;
    let mut roots = Vec::new();
    let mut complete = form.normal;
    if bound < 2 {
        return Ok(Roots { roots, complete });
    }
    let width = form.core.top().len();
    let closure = closure_search(&form.core, budget, &|s| s.top().len() <= width, &|_| false).0;
    complete &= closure.complete;
    for k in 2..=bound {
        for (m, c) in closure.members.iter().zip(&closure.conjugators) {
            match prefix_root(m, k, budget) {
                Ok(Some(g)) => {
                    let outer = form.conjugator.concat(c)?;
                    let r = conjugate_by(&outer, &g)?;
                    if r.pow(k as i64)? == *d {
                        roots.push((r, k as i64));
                        break;
                    }
                }
                Ok(None) => {}
                Err(DiagramError::TooLarge(_)) => complete = false,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Roots { roots, complete })
}

/// One summand of a power-sum form.
#[derive(Clone, Debug)]
pub enum Slot {
    Trivial(Word),
    Power(Diagram, i64),
}

/// `Δ = Γ ∘ (slot₁ + ⋯ + slotₘ) ∘ Γ⁻¹`, with `Power(Δᵢ, nᵢ)` read as `Δᵢ^{nᵢ}`.
#[derive(Clone, Debug)]
pub struct PowerSumForm {
    pub conjugator: Diagram,
    pub slots: Vec<Slot>,
}

impl PowerSumForm {
    pub fn factors(&self) -> impl Iterator<Item = (&Diagram, i64)> {
        self.slots.iter().filter_map(|s| match s {
            Slot::Power(d, n) => Some((d, *n)),
            Slot::Trivial(_) => None,
        })
    }

    pub fn reassemble(&self) -> Result<Diagram, DiagramError> {
        let p = self.conjugator.presentation().clone();
        let parts: Vec<Diagram> = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Trivial(w) => Ok(Diagram::identity(p.clone(), w.clone())),
                Slot::Power(d, n) => d.pow(*n),
            })
            .collect::<Result<_, _>>()?;
        if parts.is_empty() {
            return Ok(Diagram::identity(p, self.conjugator.bottom().clone()));
        }
        conjugate_by(&self.conjugator, &Diagram::sum_all(&parts)?)
    }
}

pub fn power_sum_form(d: &Diagram, budget: &Budget) -> Result<PowerSumForm, DiagramError> {
    let form = absolutely_reduced_form(d, budget)?;
    if form.core.is_empty() {
        return Ok(PowerSumForm { conjugator: Diagram::identity(d.presentation().clone(), d.top().clone()), slots: vec![] });
    }
    let mut slots = Vec::new();
    let mut inner: Vec<Diagram> = Vec::new();
    for c in form.core.sum_decompose().components {
        if c.is_empty() {
            inner.push(c.clone());
            slots.push(Slot::Trivial(c.top().clone()));
            continue;
        }
        let roots = find_roots(&c, budget)?;
        match roots.roots.iter().max_by_key(|(_, k)| *k) {
            Some((r, k)) => {
                // r = Θ g Θ⁻¹ with g spherical on its own word; recover Θ and g
                let f = absolutely_reduced_form(r, budget)?;
                let g = &f.core;
                if f.conjugator.concat(&g.pow(*k)?)?.concat(&f.conjugator.inverse())? == c {
                    inner.push(f.conjugator.clone());
                    slots.push(Slot::Power(g.clone(), *k));
                } else {
                    inner.push(Diagram::identity(c.presentation().clone(), c.top().clone()));
                    slots.push(Slot::Power(c.clone(), 1));
                }
            }
            None => {
                inner.push(Diagram::identity(c.presentation().clone(), c.top().clone()));
                slots.push(Slot::Power(c.clone(), 1));
            }
        }
    }
    let conjugator = form.conjugator.concat(&Diagram::sum_all(&inner)?)?;
    Ok(PowerSumForm { conjugator, slots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Cell;
    use crate::presentation::{parse_presentation, Presentation};
    use std::sync::Arc;

    fn thompson() -> (Arc<Presentation>, Word) {
        let p = Arc::new(parse_presentation("letters x\nrule x = x x\n").unwrap().presentation);
        let w = p.parse_word("x").unwrap();
        (p, w)
    }

    fn diagram(p: &Arc<Presentation>, top: &str, cells: &[(usize, Sign)]) -> Diagram {
        let cells: Vec<Cell> = cells.iter().map(|&(o, s)| Cell::new(o, 0, s)).collect();
        Diagram::from_cells(p.clone(), p.parse_word(top).unwrap(), &cells).unwrap()
    }

    fn x0(p: &Arc<Presentation>) -> Diagram {
        use Sign::*;
        diagram(p, "x", &[(0, Pos), (0, Pos), (1, Neg), (0, Neg)])
    }

    #[test]
    fn shift_figure() {
        let (p, _) = thompson();
        use Sign::*;
        let delta = diagram(&p, "x x x", &[(0, Neg), (1, Pos)]);
        let omega = diagram(&p, "x x", &[(1, Pos), (0, Neg)]);
        let shifts = cyclic_shifts(&delta, &Budget::default()).unwrap();
        assert!(shifts.contains(&omega));
        assert!(!is_trivial(&delta));
        let f = absolutely_reduced_form(&delta, &Budget::default()).unwrap();
        assert!(f.normal);
        assert_eq!(f.core.len(), 2);
        assert!(f.core.is_simple());
        assert_eq!(conjugate_by(&f.conjugator, &f.core).unwrap(), delta);
    }

    #[test]
    fn x0_and_inverse_are_not_conjugate() {
        let (p, w) = thompson();
        let oracle = WordOracle::new(p.clone(), &Budget::default());
        let g = x0(&p);
        assert_eq!(g.len(), 4);
        assert_eq!(conjugate(&g, &g.inverse(), &oracle).unwrap(), Conjugacy::NotConjugate);
        let id = Diagram::identity(p.clone(), w);
        assert_eq!(conjugate(&id, &g, &oracle).unwrap(), Conjugacy::NotConjugate);
        let h = diagram(&p, "x", &[(0, Sign::Pos), (1, Sign::Pos), (0, Sign::Neg), (0, Sign::Neg)]);
        let target = conjugate_by(&h, &g).unwrap();
        match conjugate(&target, &g, &oracle).unwrap() {
            Conjugacy::Conjugate(t) => assert_eq!(conjugate_by(&t, &g).unwrap(), target),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alpha_of_x0_counts_left_cells() {
        let (p, _) = thompson();
        let oracle = WordOracle::new(p.clone(), &Budget::default());
        let g = x0(&p);
        let a = alpha(&g, &oracle).unwrap();
        assert!(!a.is_zero());
        let comm = g.concat(&g).unwrap().concat(&g.inverse()).unwrap().concat(&g.inverse()).unwrap();
        assert!(alpha(&comm, &oracle).unwrap().is_zero());
    }

    #[test]
    fn roots_of_powers() {
        let (p, _) = thompson();
        let g = x0(&p);
        let g3 = g.pow(3).unwrap();
        let roots = find_roots(&g3, &Budget::default()).unwrap();
        assert!(roots.roots.iter().any(|(r, k)| *k == 3 && r.pow(3).unwrap() == g3), "{roots:?}");
        let f = power_sum_form(&g3, &Budget::default()).unwrap();
        assert_eq!(f.reassemble().unwrap(), g3);
    }
}
