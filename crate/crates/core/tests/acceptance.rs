//! End-to-end acceptance checks. Each criterion runs against its time limit
//! and prints one PASS/FAIL line; the run fails if any criterion fails.
//! Runs without the libtest harness so the lines are always visible.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgrp::constructions::{self, canonical_text};
use dgrp::diagram::Diagram;
use dgrp::folding::{self, accepts};
use dgrp::group_algorithms::{self as ga, Conjugacy, Membership};
use dgrp::group_presentation::generate_presentation;
use dgrp::rewriting::reduce_principal_left;
use dgrp::sampling::{random_cells, random_diagram, random_spherical};
use dgrp::script::parse_script;
use dgrp::squier::{self, Conspiciality, ConspicialWitness};
use dgrp::{parse_presentation, Budget, Letter, Presentation, Sign, Word, WordOracle};

type Check = Result<(), String>;

fn pres(src: &str) -> Arc<Presentation> {
    Arc::new(parse_presentation(src).expect("valid presentation").presentation)
}

fn thompson() -> Arc<Presentation> {
    pres("letters x\nrule x = x x\n")
}

fn three_cycle() -> Arc<Presentation> {
    pres("letters a b c\nrule a = b\nrule b = c\nrule c = a\n")
}

fn word(p: &Presentation, s: &str) -> Word {
    p.parse_word(s).expect("valid word")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A nonempty random spherical diagram on `w`. Short walks often cancel
/// completely, so each failed attempt lengthens the walk.
fn nontrivial_spherical(oracle: &WordOracle, w: &Word, len: usize, max_word: usize, rng: &mut ChaCha8Rng) -> Diagram {
    let mut len = len.max(2);
    loop {
        if let Some(d) = random_spherical(oracle, w, len, max_word, rng) {
            if !d.is_empty() {
                return d;
            }
        }
        len += 1;
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn render_powers(p: &Presentation, w: &[Letter]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let j = (i..w.len()).find(|&j| w[j] != w[i]).unwrap_or(w.len());
        out.push_str(p.symbol(w[i]));
        if j - i > 1 {
            out.push_str(&superscript(j - i));
        }
        i = j;
    }
    out
}

fn c1_rewriting_golden() -> Check {
    let p = pres("letters a b\nrule a a a = a\nrule a a a = a a\nrule b a a a = a a a b\n");
    let start = word(&p, "a b a^3 b a^4");
    let red = reduce_principal_left(&start, &p, 1000).ok_or("reduction did not stop")?;
    let mut chain = vec![render_powers(&p, &red.start)];
    chain.extend(red.steps.iter().map(|s| render_powers(&p, &s.result)));
    let got = chain.join("→");
    let want = "aba³ba⁴→a⁴b²a⁴→a²b²a⁴→a²ba³ba→a⁵b²a→a³b²a→ab²a";
    ensure(got == want, || format!("trace {got}"))
}

fn c2_reduction_confluence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let nf_pres = pres("letters a b\nrule a a a = a\nrule a a a = a a\nrule b a a a = a a a b\n");
    let bullet = constructions::bullet_product(&constructions::cyclic(), &constructions::cyclic()).unwrap();
    let braid = constructions::planar_braid(3).unwrap();
    let cases: Vec<(Arc<Presentation>, Word)> = vec![
        (thompson(), word(&thompson(), "x x")),
        (three_cycle(), word(&three_cycle(), "a a")),
        (nf_pres.clone(), word(&nf_pres, "a b a a")),
        (Arc::new(bullet.presentation.clone()), bullet.baseword.clone()),
        (Arc::new(braid.presentation.clone()), braid.baseword.clone()),
    ];
    for i in 0..500 {
        let (p, top) = &cases[i % cases.len()];
        let len = rng.gen_range(0..=8);
        let cells = random_cells(p, top, len, top.len() + 4, &mut rng);
        let canonical = Diagram::from_cells(p.clone(), top.clone(), &cells).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let other = Diagram::from_cells_randomized(p.clone(), top.clone(), &cells, &mut rng).map_err(|e| e.to_string())?;
            ensure(other == canonical, || format!("input {i}: strategies disagree on {cells:?}"))?;
        }
    }
    Ok(())
}

fn c3_word_problem() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [(thompson(), "x"), (three_cycle(), "a a"), (thompson(), "x x")];
    let oracles: Vec<(WordOracle, Word)> =
        cases.iter().map(|(p, w)| (WordOracle::new(p.clone(), &Budget::default()), word(p, w))).collect();
    for i in 0..1000 {
        let (o, w) = &oracles[i % oracles.len()];
        let d = random_diagram(o.presentation(), w, rng.gen_range(1..=12), w.len() + 5, &mut rng).map_err(|e| e.to_string())?;
        let dd = d.concat(&d.inverse()).map_err(|e| e.to_string())?;
        ensure(ga::is_trivial(&dd), || format!("Δ∘Δ⁻¹ nontrivial for {}", d.render()))?;
    }
    for i in 0..1000 {
        let (o, w) = &oracles[i % oracles.len()];
        let d = nontrivial_spherical(o, w, rng.gen_range(1..=10), w.len() + 4, &mut rng);
        ensure(!ga::is_trivial(&d), || format!("reduced nonempty diagram reported trivial: {}", d.render()))?;
    }
    Ok(())
}

fn c4_squier_enumeration() -> Check {
    let p = three_cycle();
    let c = squier::enumerate_class(&word(&p, "a"), &p, &Budget::default());
    let got = (c.words.len(), c.edges.len(), c.squares.len(), c.complete);
    ensure(got == (3, 3, 0, true), || format!("3-cycle: {got:?}"))?;
    let q = pres("letters a b c x y\nrule a = b\nrule x = y\nrule c = a x\nrule c = b x\n");
    let c = squier::enumerate_class(&word(&q, "c"), &q, &Budget::default());
    let got = (c.words.len(), c.edges.len(), c.squares.len(), c.complete);
    ensure(got == (5, 6, 1, true), || format!("[c]: {got:?}"))?;
    ensure(c.first_homology_rank() == 1, || format!("H1 rank {}", c.first_homology_rank()))
}

fn c5_presentation_theorem() -> Check {
    let p = thompson();
    let g = generate_presentation(&p, &word(&p, "x"), 9, &Budget::default()).map_err(|e| e.to_string())?;
    // s_i = (x, x² → x, x^i); normalize generator indices to these.
    let mut index = HashMap::new();
    for (k, e) in g.generators.iter().enumerate() {
        ensure(e.u.len() == 1 && e.v.iter().all(|&l| l == Letter(0)), || format!("unexpected generator {}", e.render(&g.system)))?;
        index.insert(k, e.v.len());
    }
    ensure(g.relators.len() >= 10, || format!("only {} relators", g.relators.len()))?;
    for r in g.relators.iter().take(10) {
        let (Some(a), Some(b), Some(c)) = (r.lhs, r.rhs, r.conjugator) else {
            return Err(format!("relator {} involves the identity", r.render()));
        };
        let (n1, n, m) = (index[&a], index[&b], index[&c]);
        ensure(n1 == n + 1 && n > m, || format!("relator {} is s{n1} = s{n}^s{m}", r.render()))?;
    }
    Ok(())
}

fn c6_conjugacy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [(thompson(), "x"), (thompson(), "x x"), (three_cycle(), "a a")];
    let oracles: Vec<(WordOracle, Word)> =
        cases.iter().map(|(p, w)| (WordOracle::new(p.clone(), &Budget::default()), word(p, w))).collect();
    for i in 0..200 {
        let (o, w) = &oracles[i % oracles.len()];
        let g = nontrivial_spherical(o, w, rng.gen_range(2..=8), w.len() + 3, &mut rng);
        let h = nontrivial_spherical(o, w, rng.gen_range(2..=8), w.len() + 3, &mut rng);
        let b = ga::conjugate_by(&h, &g).map_err(|e| e.to_string())?;
        match ga::conjugate(&b, &g, o).map_err(|e| e.to_string())? {
            Conjugacy::Conjugate(t) => {
                let back = ga::conjugate_by(&t, &g).map_err(|e| e.to_string())?;
                ensure(back == b, || format!("pair {i}: witness does not verify"))?;
            }
            other => return Err(format!("pair {i}: {other:?} for g = {}, h = {}", g.render(), h.render())),
        }
    }
    // Minimal nontrivial spherical (x, x)-diagrams, by exhaustive search.
    let p = thompson();
    let x = word(&p, "x");
    let ball = squier::median_ball(&Diagram::identity(p.clone(), x.clone()), 6, &Budget::default());
    ensure(!ball.truncated, || "ball truncated".into())?;
    let spherical: Vec<&Diagram> = ball.vertices.iter().filter(|d| d.is_spherical() && !d.is_empty()).collect();
    let min = spherical.iter().map(|d| d.len()).min().ok_or("no spherical diagram in the ball")?;
    let minimal: Vec<&Diagram> = spherical.into_iter().filter(|d| d.len() == min).collect();
    ensure(minimal.len() == 2, || format!("{} minimal spherical diagrams with {min} cells", minimal.len()))?;
    let o = WordOracle::new(p.clone(), &Budget::default());
    match ga::conjugate(minimal[0], minimal[1], &o).map_err(|e| e.to_string())? {
        Conjugacy::NotConjugate => Ok(()),
        other => Err(format!("minimal pair decided {other:?}")),
    }
}

/// Left/right cell counts over `⟨x | x = x²⟩`: kernel membership iff
/// positive and negative left cells balance and likewise for right cells.
fn left_right_balanced(d: &Diagram) -> bool {
    let words = d.words();
    let (mut left, mut right) = (0i64, 0i64);
    for (c, w) in d.cells().iter().zip(&words) {
        let len = d.presentation().relation(c.relation).pattern(c.sign).len();
        let (l_empty, r_empty) = (c.offset == 0, c.offset + len == w.len());
        let s = if c.sign == Sign::Pos { 1 } else { -1 };
        if l_empty && !r_empty {
            left += s;
        }
        if r_empty && !l_empty {
            right += s;
        }
    }
    left == 0 && right == 0
}

fn c7_alpha() -> Check {
    let f = constructions::thompson_commutator(3).map_err(|e| e.to_string())?;
    let fp = Arc::new(f.presentation.clone());
    let six = parse_script(
        &fp,
        "[-|a1>a2 x|b1]; [a2 x|b1>x b2|-]; [a2|x>x x|x b2]; [a2 x|x x>x|b2]; [-|a2 x>a1|x b2]; [a1|x b2>b1|-]",
    )
    .map_err(|e| e.to_string())?;
    ensure(six.len() == 6 && six.is_spherical(), || format!("six-cell diagram reduced to {}", six.render()))?;
    let fo = WordOracle::new(fp.clone(), &Budget::default());
    let a = ga::alpha(&six, &fo).ok_or("alpha undefined")?;
    ensure(a.is_zero(), || format!("alpha of the six-cell diagram is {:?}", a.0))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = thompson();
    let o = WordOracle::new(p.clone(), &Budget::default());
    let x = word(&p, "x");
    let (mut yes, mut no) = (0, 0);
    for i in 0..500 {
        let d = random_spherical(&o, &x, rng.gen_range(0..=12), 6, &mut rng).ok_or("no random diagram")?;
        let m = ga::in_commutator_subgroup(&d, &o);
        let expect = if left_right_balanced(&d) { Membership::Yes } else { Membership::No };
        ensure(m == expect, || format!("diagram {i}: alpha says {m:?}, cell counts say {expect:?}"))?;
        if m == Membership::Yes {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || format!("degenerate sample: {yes} in kernel, {no} outside"))?;
    for i in 0..200 {
        let g = random_spherical(&o, &x, rng.gen_range(1..=10), 6, &mut rng).ok_or("no random diagram")?;
        let h = random_spherical(&o, &x, rng.gen_range(1..=10), 6, &mut rng).ok_or("no random diagram")?;
        let c = g.concat(&h).and_then(|gh| gh.concat(&g.inverse())).and_then(|d| d.concat(&h.inverse())).map_err(|e| e.to_string())?;
        let a = ga::alpha(&c, &o).ok_or("alpha undefined")?;
        ensure(a.is_zero(), || format!("commutator {i} has nonzero alpha"))?;
    }
    Ok(())
}

fn c8_roots() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = [(thompson(), "x"), (three_cycle(), "a a"), (thompson(), "x x")];
    let budget = Budget::default();
    let oracles: Vec<(WordOracle, Word)> = cases.iter().map(|(p, w)| (WordOracle::new(p.clone(), &budget), word(p, w))).collect();
    let mut done = 0;
    let mut i = 0;
    while done < 100 {
        let (o, w) = &oracles[i % oracles.len()];
        i += 1;
        let g = nontrivial_spherical(o, w, rng.gen_range(2..=8), w.len() + 3, &mut rng);
        let core = ga::absolutely_reduced_form(&g, &budget).map_err(|e| e.to_string())?.core;
        if core.is_empty() {
            continue;
        }
        done += 1;
        let k = rng.gen_range(2..=5i64);
        let power = core.pow(k).map_err(|e| e.to_string())?;
        let roots = ga::find_roots(&power, &budget).map_err(|e| e.to_string())?;
        let bound = (power.len() / 2) as i64;
        for (r, e) in &roots.roots {
            ensure(e.abs() <= bound, || format!("exponent {e} exceeds bound {bound}"))?;
            ensure(r.pow(*e).map_err(|e| e.to_string())? == power, || "reported root does not power back".into())?;
        }
        ensure(roots.roots.iter().any(|(_, e)| e % k == 0), || {
            format!("core {} ^ {k}: exponents {:?}", core.render(), roots.roots.iter().map(|r| r.1).collect::<Vec<_>>())
        })?;
    }
    Ok(())
}

fn c9_median_geometry() -> Check {
    let p = three_cycle();
    let aa = word(&p, "a a");
    let identity = Diagram::identity(p.clone(), aa.clone());
    let far = parse_script(&p, "[-|a>b|a]; [b|a>b|-]; [-|b>c|b]").map_err(|e| e.to_string())?;
    for center in [identity.clone(), far] {
        let ball = squier::median_ball(&center, 4, &Budget::default());
        ensure(!ball.truncated, || "ball truncated".into())?;
        let vs = &ball.vertices;
        for v in vs {
            let d = squier::distance(&identity, v).map_err(|e| e.to_string())?;
            ensure(d == v.len(), || format!("d(ε, Δ) = {d} but #Δ = {}", v.len()))?;
        }
        let n = vs.len();
        let mut dist = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = squier::distance(&vs[i], &vs[j]).map_err(|e| e.to_string())?;
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        let index: HashMap<&Diagram, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let between = |m: usize, x: usize, y: usize| dist[x][m] + dist[m][y] == dist[x][y];
                    let brute: Vec<usize> = (0..n).filter(|&m| between(m, a, b) && between(m, b, c) && between(m, a, c)).collect();
                    let m = squier::median(&vs[a], &vs[b], &vs[c]).map_err(|e| e.to_string())?;
                    match (brute.as_slice(), index.get(&m)) {
                        ([only], Some(&got)) if *only == got => {}
                        _ => return Err(format!("triple ({a},{b},{c}): brute force {brute:?}, prefix median {:?}", index.get(&m))),
                    }
                }
            }
        }
    }
    Ok(())
}

/// Vertex/edge/cell counts and the multiset of relation images.
fn signature(x: &folding::Directed2Complex) -> (usize, usize, usize, BTreeMap<usize, usize>) {
    let mut rels = BTreeMap::new();
    for c in x.cell_pairs() {
        *rels.entry(c.relation).or_insert(0) += 1;
    }
    (x.vertex_count(), x.edges().len(), x.cell_pairs().len(), rels)
}

fn c10_folding() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let p = thompson();
    let o = WordOracle::new(p.clone(), &Budget::default());
    let x = word(&p, "x");
    let xx = word(&p, "x x");

    for i in 0..20 {
        let u2 = if i % 2 == 0 { &x } else { &xx };
        let d1 = nontrivial_spherical(&o, &x, rng.gen_range(2..=8), 4, &mut rng);
        let d2 = nontrivial_spherical(&o, u2, rng.gen_range(2..=8), 5, &mut rng);
        let sum = d1.sum(&d2).map_err(|e| e.to_string())?;
        let top = sum.top().clone();
        let cl = folding::closure_complex(&p, &top, std::slice::from_ref(&sum)).map_err(|e| e.to_string())?;
        ensure(cl.is_locally_injective(), || "fold result not locally injective".into())?;
        let left = d1.sum(&Diagram::identity(p.clone(), u2.clone())).map_err(|e| e.to_string())?;
        let right = Diagram::identity(p.clone(), x.clone()).sum(&d2).map_err(|e| e.to_string())?;
        ensure(accepts(&cl, &sum), || format!("pair {i}: generator rejected"))?;
        ensure(accepts(&cl, &left), || format!("pair {i}: Δ₁+ε(u₂) rejected"))?;
        ensure(accepts(&cl, &right), || format!("pair {i}: ε(u₁)+Δ₂ rejected"))?;
    }

    for i in 0..30 {
        let gens: Vec<Diagram> = (0..rng.gen_range(1..=3)).map(|_| nontrivial_spherical(&o, &x, rng.gen_range(2..=8), 4, &mut rng)).collect();
        let cl = folding::closure_complex(&p, &x, &gens).map_err(|e| e.to_string())?;
        for g in &gens {
            ensure(accepts(&cl, g), || format!("set {i}: generator rejected"))?;
        }
        for _ in 0..5 {
            let a = &gens[rng.gen_range(0..gens.len())];
            let b = &gens[rng.gen_range(0..gens.len())];
            let prod = a.concat(&b.inverse()).map_err(|e| e.to_string())?;
            ensure(accepts(&cl, &prod), || format!("set {i}: a∘b⁻¹ rejected"))?;
        }
    }

    // A non-member of Cl(⟨g⟩) for an absolutely reduced g, certified by
    // comparing with every power of g that has at most as many cells.
    let x0 = parse_script(&p, "[-|x>x x|-]; [-|x>x x|x]; [x|x x>x|-]; [-|x x>x|-]").map_err(|e| e.to_string())?;
    let g = ga::absolutely_reduced_form(&x0, &Budget::default()).map_err(|e| e.to_string())?.core;
    ensure(!g.is_empty() && ga::square_is_reduced(&g), || "generator not absolutely reduced".into())?;
    let base = g.top().clone();
    let cl = folding::closure_complex(&p, &base, std::slice::from_ref(&g)).map_err(|e| e.to_string())?;
    let mut certified = 0;
    for _ in 0..200 {
        let h = nontrivial_spherical(&o, &base, rng.gen_range(2..=10), base.len() + 4, &mut rng);
        if accepts(&cl, &h) {
            continue;
        }
        let kmax = (h.len() / g.len()) as i64;
        let in_h = (-kmax..=kmax).any(|k| g.pow(k).map(|gk| gk == h).unwrap_or(false));
        ensure(!in_h, || format!("rejected diagram {} is a power of the generator", h.render()))?;
        certified += 1;
    }
    ensure(certified > 0, || "no rejected diagram found".into())?;

    for i in 0..100 {
        let gens: Vec<Diagram> = (0..rng.gen_range(1..=4)).map(|_| nontrivial_spherical(&o, &x, rng.gen_range(2..=8), 5, &mut rng)).collect();
        let wedge = folding::wedge_of_generators(&p, &x, &gens).map_err(|e| e.to_string())?;
        let reference = folding::fold(&wedge);
        let probes: Vec<Diagram> = (0..10).map(|_| nontrivial_spherical(&o, &x, rng.gen_range(2..=8), 5, &mut rng)).collect();
        for _ in 0..5 {
            let other = folding::fold_randomized(&wedge, &mut rng);
            ensure(signature(&other) == signature(&reference), || format!("wedge {i}: fold order changes the result"))?;
            for d in gens.iter().chain(&probes) {
                ensure(accepts(&other, d) == accepts(&reference, d), || format!("wedge {i}: fold order changes acceptance"))?;
            }
        }
    }
    Ok(())
}

fn c11_conspiciality() -> Check {
    let braid = constructions::planar_braid(3).map_err(|e| e.to_string())?;
    let bo = WordOracle::new(Arc::new(braid.presentation.clone()), &Budget::default());
    let v = squier::check_conspicial(&braid.baseword, &bo);
    ensure(v == Conspiciality::Conspicial, || format!("planar_braid(3): {v:?}"))?;

    // Z•Z with the letter names a1 a2 a3 b1 b2 b3 p; criterion 12 checks it
    // against the construction.
    let zp = pres(&golden("bullet_zz.pres")?);
    let zo = WordOracle::new(zp.clone(), &Budget::default());
    let base = word(&zp, "a1 b1");
    let v = squier::check_conspicial(&base, &zo);
    ensure(v == Conspiciality::Conspicial, || format!("Z•Z: {v:?}"))?;
    let (labels, certain) = squier::hyperplanes(&base, &zo);
    ensure(certain, || "hyperplane labels uncertain".into())?;
    let names: Vec<String> = labels.iter().map(|l| l.render(&zp)).collect();
    let a_side = ["[1, a1 -> a2, b1]", "[1, a2 -> a3, b1]", "[1, a3 -> a1, b1]", "[1, a1 -> a1 p, b1]"];
    let b_side = ["[a1, b1 -> b2, 1]", "[a1, b2 -> b3, 1]", "[a1, b3 -> b1, 1]", "[a1, b1 -> p b1, 1]"];
    let expected: HashSet<&str> = a_side.iter().chain(&b_side).copied().collect();
    let got: HashSet<&str> = names.iter().map(String::as_str).collect();
    ensure(got == expected, || format!("hyperplanes {names:?}"))?;
    let graph = squier::crossing_graph(&labels, &zo).ok_or("crossing graph undecided")?;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            let want = a_side.contains(&names[i].as_str()) != a_side.contains(&names[j].as_str());
            ensure(graph[i][j] == want, || format!("crossing {} / {}: {}", names[i], names[j], graph[i][j]))?;
        }
    }
    let d1 = parse_script(&zp, "[-|a1>a2|b1]; [-|a2>a3|b1]; [-|a3>a1|b1]").map_err(|e| e.to_string())?;
    let hw = squier::hyperplane_word(&d1, &zo).ok_or("hyperplane word undefined")?;
    let rendered: Vec<(String, Sign)> = hw.iter().map(|(l, s)| (l.render(&zp), *s)).collect();
    let want: Vec<(String, Sign)> = a_side[..3].iter().map(|s| (s.to_string(), Sign::Pos)).collect();
    ensure(rendered == want, || format!("hyperplane word {rendered:?}"))?;

    let p = thompson();
    let o = WordOracle::new(p.clone(), &Budget::default());
    let x = word(&p, "x").to_vec();
    match squier::check_conspicial(&x, &o) {
        Conspiciality::NotConspicial(ConspicialWitness::Osculation { a, b, p: q }) if a == x && b == x && q == x => Ok(()),
        other => Err(format!("thompson: {other:?}")),
    }
}

fn golden(file: &str) -> Result<String, String> {
    let path = format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))
}

fn c12_golden_files() -> Check {
    let z = constructions::cyclic();
    let cases = [
        ("wreath_z.pres", constructions::wreath_with_z(&z)),
        ("bullet_zz.pres", constructions::bullet_product(&z, &z)),
        ("square_zz.pres", constructions::square_product(&z, &z)),
        ("thompson.pres", Ok(constructions::thompson())),
        ("thompson_commutator_2.pres", constructions::thompson_commutator(2)),
        ("planar_braid_3.pres", constructions::planar_braid(3)),
    ];
    for (file, built) in cases {
        let built = built.map_err(|e| e.to_string())?;
        let text = golden(file)?;
        let golden = parse_presentation(&text).map_err(|e| format!("{file}: {e}"))?.into_based().ok_or("golden file without base")?;
        ensure(canonical_text(&built) == canonical_text(&golden), || format!("{file} differs:\n{}", canonical_text(&built)))?;
    }
    Ok(())
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 12] = [
        ("rewriting golden trace", 1, c1_rewriting_golden),
        ("reduction confluence", 30, c2_reduction_confluence),
        ("word problem", 30, c3_word_problem),
        ("Squier enumeration", 1, c4_squier_enumeration),
        ("presentation theorem", 5, c5_presentation_theorem),
        ("conjugacy", 60, c6_conjugacy),
        ("alpha map", 60, c7_alpha),
        ("roots", 60, c8_roots),
        ("median geometry", 120, c9_median_geometry),
        ("folding", 60, c10_folding),
        ("conspiciality", 10, c11_conspiciality),
        ("construction golden files", 1, c12_golden_files),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took < Duration::from_secs(*limit), || format!("took {:.2}s, limit {limit}s", took.as_secs_f64()))
        });
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({:.2}s)", k + 1, took.as_secs_f64()),
            Err(e) => {
                println!("FAIL {:>2} {name} ({:.2}s): {e}", k + 1, took.as_secs_f64());
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
