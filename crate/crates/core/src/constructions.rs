//! Presentations and basewords for the standard families of diagram groups
//! and the combinators that build new diagram groups from old ones.

use std::collections::HashMap;

use crate::error::PresentationError;
use crate::presentation::{format_presentation, BasedPresentation, Letter, Presentation, Word};

type Rule = (Vec<Letter>, Vec<Letter>);

/// Accumulates an alphabet and relations, renaming colliding symbols with
/// ticks (`a`, `a'`, `a''`, …).
#[derive(Default)]
struct Builder {
    symbols: Vec<String>,
    taken: HashMap<String, Letter>,
    rules: Vec<Rule>,
}

impl Builder {
    fn fresh(&mut self, name: &str) -> Letter {
        let mut s = name.to_string();
        while self.taken.contains_key(&s) {
            s.push('\'');
        }
        let l = Letter(self.symbols.len() as u32);
        self.symbols.push(s.clone());
        self.taken.insert(s, l);
        l
    }

    /// Copies a presentation's alphabet; returns the letter translation.
    fn import(&mut self, p: &Presentation) -> Vec<Letter> {
        p.symbols().iter().map(|s| self.fresh(s)).collect()
    }

    fn import_rules(&mut self, p: &Presentation, map: &[Letter]) {
        for r in p.relations() {
            self.rules.push((translate(&r.left, map), translate(&r.right, map)));
        }
    }

    fn finish(self, base: Vec<Letter>) -> Result<BasedPresentation, PresentationError> {
        let p = Presentation::new(self.symbols, self.rules)?;
        Ok(BasedPresentation::new(p, Word::new(base)?))
    }
}

fn translate(w: &[Letter], map: &[Letter]) -> Vec<Letter> {
    w.iter().map(|l| map[l.rank()]).collect()
}

fn construction(msg: impl Into<String>) -> PresentationError {
    PresentationError::Construction(msg.into())
}

/// `⟨{o} ⊔ Σᵢ | Rᵢ ⊔ {o = wᵢ}⟩` at `o`: the free product of the parts.
pub fn free_product(parts: &[BasedPresentation]) -> Result<BasedPresentation, PresentationError> {
    if parts.is_empty() {
        return Err(construction("free product of an empty list"));
    }
    let mut b = Builder::default();
    let o = b.fresh("o");
    let maps: Vec<Vec<Letter>> = parts.iter().map(|part| b.import(&part.presentation)).collect();
    for (part, map) in parts.iter().zip(&maps) {
        b.import_rules(&part.presentation, map);
    }
    for (part, map) in parts.iter().zip(&maps) {
        b.rules.push((vec![o], translate(&part.baseword, map)));
    }
    b.finish(vec![o])
}

/// Disjoint union of the presentations at `w₁⋯wₙ`: the direct sum.
pub fn direct_sum(parts: &[BasedPresentation]) -> Result<BasedPresentation, PresentationError> {
    if parts.is_empty() {
        return Err(construction("direct sum of an empty list"));
    }
    let mut b = Builder::default();
    let mut base = Vec::new();
    for part in parts {
        let map = b.import(&part.presentation);
        b.import_rules(&part.presentation, &map);
        base.extend(translate(&part.baseword, &map));
    }
    b.finish(base)
}

/// The countable direct sum, truncated after `n` relations
/// `w₁⋯wₖ x = w₁⋯wₖ₊₁ x` (`0 ≤ k < n`), at baseword `x`.
///
/// A single part is repeated with its alphabet shared between the copies;
/// otherwise exactly `n` parts are required.
pub fn countable_sum(parts: &[BasedPresentation], n: usize) -> Result<BasedPresentation, PresentationError> {
    if n < 1 {
        return Err(construction("truncation must be at least 1"));
    }
    if parts.len() != 1 && parts.len() != n {
        return Err(construction(format!("expected 1 or {n} parts, got {}", parts.len())));
    }
    let mut b = Builder::default();
    let x = b.fresh("x");
    let words: Vec<Vec<Letter>> = if parts.len() == 1 {
        let map = b.import(&parts[0].presentation);
        b.import_rules(&parts[0].presentation, &map);
        vec![translate(&parts[0].baseword, &map); n]
    } else {
        let maps: Vec<Vec<Letter>> = parts.iter().map(|p| b.import(&p.presentation)).collect();
        for (p, m) in parts.iter().zip(&maps) {
            b.import_rules(&p.presentation, m);
        }
        parts.iter().zip(&maps).map(|(p, m)| translate(&p.baseword, m)).collect()
    };
    let mut prefix: Vec<Letter> = Vec::new();
    for w in &words {
        let mut left = prefix.clone();
        left.push(x);
        prefix.extend_from_slice(w);
        let mut right = prefix.clone();
        right.push(x);
        b.rules.push((left, right));
    }
    b.finish(vec![x])
}

/// Whether some relation side occurs in a power of `w` across a junction
/// between two copies.
fn overlaps_junction(p: &Presentation, w: &[Letter]) -> bool {
    let sides = p.relations().iter().flat_map(|r| [&r.left, &r.right]);
    for side in sides {
        let copies = side.len().div_ceil(w.len()) + 1;
        let big: Vec<Letter> = w.iter().copied().cycle().take(w.len() * copies).collect();
        for i in 0..=big.len() - side.len() {
            let end = i + side.len();
            let crosses = (1..copies).any(|k| i < k * w.len() && k * w.len() < end);
            if crosses && big[i..end] == side[..] {
                return true;
            }
        }
    }
    false
}

/// `G ≀ ℤ`: adds `a = asws`, `b = swsb` at baseword `ab`, dropping the
/// separator `s` when no relation can straddle two adjacent copies of `w`.
pub fn wreath_with_z(g: &BasedPresentation) -> Result<BasedPresentation, PresentationError> {
    let keep_s = overlaps_junction(&g.presentation, &g.baseword);
    let mut b = Builder::default();
    let map = b.import(&g.presentation);
    b.import_rules(&g.presentation, &map);
    let a = b.fresh("a");
    let bb = b.fresh("b");
    let w = translate(&g.baseword, &map);
    let sws = if keep_s {
        let s = b.fresh("s");
        let mut v = vec![s];
        v.extend_from_slice(&w);
        v.push(s);
        v
    } else {
        w
    };
    let mut left = vec![a];
    left.extend_from_slice(&sws);
    let mut right = sws.clone();
    right.push(bb);
    b.rules.push((vec![a], left));
    b.rules.push((vec![bb], right));
    b.finish(vec![a, bb])
}

/// `A • B`: adds `p` with `w₁ = w₁p`, `w₂ = pw₂` at baseword `w₁w₂`.
pub fn bullet_product(x: &BasedPresentation, y: &BasedPresentation) -> Result<BasedPresentation, PresentationError> {
    let mut b = Builder::default();
    let mx = b.import(&x.presentation);
    let my = b.import(&y.presentation);
    b.import_rules(&x.presentation, &mx);
    b.import_rules(&y.presentation, &my);
    let p = b.fresh("p");
    let w1 = translate(&x.baseword, &mx);
    let w2 = translate(&y.baseword, &my);
    let mut w1p = w1.clone();
    w1p.push(p);
    let mut pw2 = vec![p];
    pw2.extend_from_slice(&w2);
    b.rules.push((w1.clone(), w1p));
    b.rules.push((w2.clone(), pw2));
    let mut base = w1;
    base.extend(w2);
    b.finish(base)
}

/// `A □ B`: adds `x, y` with `w₁x = w₁y`, `xw₂ = yw₂` at baseword `w₁xw₂`.
pub fn square_product(l: &BasedPresentation, r: &BasedPresentation) -> Result<BasedPresentation, PresentationError> {
    let mut b = Builder::default();
    let ml = b.import(&l.presentation);
    let mr = b.import(&r.presentation);
    b.import_rules(&l.presentation, &ml);
    b.import_rules(&r.presentation, &mr);
    let x = b.fresh("x");
    let y = b.fresh("y");
    let w1 = translate(&l.baseword, &ml);
    let w2 = translate(&r.baseword, &mr);
    let cat = |u: &[Letter], v: &[Letter]| -> Vec<Letter> { u.iter().chain(v).copied().collect() };
    b.rules.push((cat(&w1, &[x]), cat(&w1, &[y])));
    b.rules.push((cat(&[x], &w2), cat(&[y], &w2)));
    let base = cat(&cat(&w1, &[x]), &w2);
    b.finish(base)
}

/// The right-angled Artin group of the interval graph on `intervals`
/// (inclusive, within `1..=n`; disjoint intervals commute).
pub fn interval_raag(n: usize, intervals: &[(usize, usize)]) -> Result<BasedPresentation, PresentationError> {
    if n == 0 {
        return Err(construction("n must be at least 1"));
    }
    let mut b = Builder::default();
    let xs: Vec<Letter> = (1..=n).map(|i| b.fresh(&format!("x{i}"))).collect();
    for &(lo, hi) in intervals {
        if lo < 1 || hi > n || lo > hi {
            return Err(construction(format!("interval [{lo},{hi}] is not within 1..{n}")));
        }
        let a = b.fresh(&format!("a{lo}_{hi}"));
        let bb = b.fresh(&format!("b{lo}_{hi}"));
        let c = b.fresh(&format!("c{lo}_{hi}"));
        b.rules.push((xs[lo - 1..hi].to_vec(), vec![a]));
        b.rules.push((vec![a], vec![bb]));
        b.rules.push((vec![bb], vec![c]));
        b.rules.push((vec![c], vec![a]));
    }
    b.finish(xs)
}

/// `⟨a, b, c | a = b, b = c, c = a⟩` at `a`: the infinite cyclic group.
pub fn cyclic() -> BasedPresentation {
    let mut b = Builder::default();
    let [a, bb, c] = ["a", "b", "c"].map(|s| b.fresh(s));
    b.rules = vec![(vec![a], vec![bb]), (vec![bb], vec![c]), (vec![c], vec![a])];
    b.finish(vec![a]).expect("valid")
}

/// `⟨x | x = xᵏ⟩` at `x`: Thompson's group `F_{k-1}` (`F` for `k = 2`).
pub fn thompson_n(k: usize) -> Result<BasedPresentation, PresentationError> {
    if k < 2 {
        return Err(construction("thompson_n needs k >= 2"));
    }
    let mut b = Builder::default();
    let x = b.fresh("x");
    b.rules.push((vec![x], vec![x; k]));
    b.finish(vec![x])
}

pub fn thompson() -> BasedPresentation {
    thompson_n(2).expect("k = 2 is legal")
}

/// The commutator subgroup `F′`, with the letter families `aᵢ`, `bᵢ`
/// truncated at index `n`.
pub fn thompson_commutator(n: usize) -> Result<BasedPresentation, PresentationError> {
    if n < 2 {
        return Err(construction("thompson_commutator needs N >= 2"));
    }
    let mut b = Builder::default();
    let x = b.fresh("x");
    let a: Vec<Letter> = (1..=n).map(|i| b.fresh(&format!("a{i}"))).collect();
    let bs: Vec<Letter> = (1..=n).map(|i| b.fresh(&format!("b{i}"))).collect();
    b.rules.push((vec![x], vec![x, x]));
    for i in 0..n - 1 {
        b.rules.push((vec![a[i]], vec![a[i + 1], x]));
    }
    for i in 0..n - 1 {
        b.rules.push((vec![bs[i]], vec![x, bs[i + 1]]));
    }
    let mut bp = b.finish(vec![a[0], bs[0]])?;
    bp.boundary = vec![a[n - 1], bs[n - 1]];
    Ok(bp)
}

fn braid_presentation(n: usize) -> (Builder, Vec<Letter>) {
    let mut b = Builder::default();
    let xs: Vec<Letter> = (1..=n).map(|i| b.fresh(&format!("x{i}"))).collect();
    for i in 0..n {
        for j in i + 1..n {
            b.rules.push((vec![xs[i], xs[j]], vec![xs[j], xs[i]]));
        }
    }
    (b, xs)
}

/// The pure planar braid group `PTₙ` at `x₁⋯xₙ`.
pub fn planar_braid(n: usize) -> Result<BasedPresentation, PresentationError> {
    if n < 1 {
        return Err(construction("planar_braid needs n >= 1"));
    }
    let (b, xs) = braid_presentation(n);
    b.finish(xs)
}

/// Coloured pure planar braids: the braid presentation at `x₁^{r₁}⋯xₙ^{rₙ}`.
pub fn colored_braid(r: &[usize]) -> Result<BasedPresentation, PresentationError> {
    if r.is_empty() || r.contains(&0) {
        return Err(construction("colored_braid needs positive multiplicities"));
    }
    let (b, xs) = braid_presentation(r.len());
    let base = xs.iter().zip(r).flat_map(|(&x, &k)| std::iter::repeat_n(x, k)).collect();
    b.finish(base)
}

/// Looks up a builtin by name: `thompson`, `thompson_n(k)`,
/// `thompson_commutator(N)`, `planar_braid(n)`, `colored_braid(r1,…,rn)`, `z`.
pub fn builtin(name: &str) -> Result<BasedPresentation, PresentationError> {
    let name = name.trim();
    let (head, args) = match name.split_once('(') {
        None => (name, Vec::new()),
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| construction(format!("malformed builtin `{name}`")))?;
            let args = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| construction(format!("bad argument `{s}`"))))
                .collect::<Result<Vec<usize>, _>>()?;
            (h.trim(), args)
        }
    };
    let one = |args: &[usize]| -> Result<usize, PresentationError> {
        match args {
            [k] => Ok(*k),
            _ => Err(construction(format!("`{head}` takes one argument"))),
        }
    };
    match head {
        "thompson" if args.is_empty() => Ok(thompson()),
        "z" if args.is_empty() => Ok(cyclic()),
        "thompson_n" => thompson_n(one(&args)?),
        "thompson_commutator" => thompson_commutator(one(&args)?),
        "planar_braid" => planar_braid(one(&args)?),
        "colored_braid" => colored_braid(&args),
        _ => Err(construction(format!("unknown builtin `{name}`"))),
    }
}

/// Renames letters `l0, l1, …` by first appearance (baseword, then rules in
/// order, then unused letters by rank) and prints the result with letters
/// sorted by their new index. Rule order is kept.
pub fn canonical_text(bp: &BasedPresentation) -> String {
    let p = &bp.presentation;
    let mut order: Vec<Letter> = Vec::new();
    let mut index: HashMap<Letter, usize> = HashMap::new();
    let mut visit = |l: Letter, order: &mut Vec<Letter>| {
        index.entry(l).or_insert_with(|| {
            order.push(l);
            order.len() - 1
        });
    };
    for &l in bp.baseword.iter() {
        visit(l, &mut order);
    }
    for r in p.relations() {
        for &l in r.left.iter().chain(r.right.iter()) {
            visit(l, &mut order);
        }
    }
    for l in p.letters() {
        visit(l, &mut order);
    }
    let mut new_of = vec![Letter(0); p.alphabet_size()];
    for (i, l) in order.iter().enumerate() {
        new_of[l.rank()] = Letter(i as u32);
    }
    let symbols: Vec<String> = (0..order.len()).map(|i| format!("l{i}")).collect();
    let rules: Vec<Rule> =
        p.relations().iter().map(|r| (translate(&r.left, &new_of), translate(&r.right, &new_of))).collect();
    let q = Presentation::new(symbols, rules).expect("renaming preserves validity");
    let base = translate(&bp.baseword, &new_of);
    let boundary = translate(&bp.boundary, &new_of);
    format_presentation(&q, Some(&base), &boundary)
}
