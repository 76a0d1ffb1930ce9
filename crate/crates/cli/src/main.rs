//! `dgrp`: command-line front end for computations in diagram groups.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use dgrp::constructions;
use dgrp::diagram::Diagram;
use dgrp::folding;
use dgrp::group_algorithms::{self as ga, Conjugacy, Membership, Slot};
use dgrp::group_presentation::generate_presentation;
use dgrp::presentation::{format_presentation, parse_presentation, BasedPresentation, Presentation, Word};
use dgrp::rewriting::{
    check_completeness, check_termination, reduce_principal_left, Confluence, ReductionOrder, Termination, WordOracle,
};
use dgrp::script::{parse_script, to_script};
use dgrp::squier::{self, Conspiciality, ConspicialWitness};
use dgrp::Budget;

#[derive(Parser, Debug)]
#[command(name = "dgrp", version, about = "Exact computation in diagram groups of semigroup presentations")]
struct Cli {
    /// Presentation file.
    #[arg(long, global = true, conflicts_with = "builtin")]
    presentation: Option<PathBuf>,
    /// Builtin presentation such as `thompson`, `z`, `planar_braid(3)` or `thompson_commutator(2)`.
    #[arg(long, global = true)]
    builtin: Option<String>,
    /// Baseword, overriding the one given by the presentation source.
    #[arg(long, global = true)]
    base: Option<String>,
    #[arg(long = "budget-words", global = true, default_value_t = 10_000, value_parser = positive)]
    budget_words: usize,
    #[arg(long = "budget-steps", global = true, default_value_t = 100_000, value_parser = positive)]
    budget_steps: usize,
    #[arg(long = "budget-frontier", global = true, default_value_t = 10_000, value_parser = positive)]
    budget_frontier: usize,
    #[arg(long = "budget-witness", global = true, default_value_t = 4, value_parser = positive)]
    budget_witness: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized procedures.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse the presentation and print a summary.
    Validate,
    /// Check termination and local confluence.
    CompleteCheck,
    /// Principal-left reduction trace of a word.
    Nf { word: String },
    /// Build a presentation from the standard constructions.
    Construct {
        /// `free_product`, `direct_sum`, `countable_sum`, `wreath_z`, `bullet`, `square`, `interval_raag`, or a builtin name.
        op: String,
        /// Operands: presentation files (with a `base` line) or builtin names.
        operands: Vec<String>,
        /// Copies for `countable_sum`, points for `interval_raag`.
        #[arg(long)]
        n: Option<usize>,
        /// Intervals for `interval_raag`, e.g. `1-2,3-4`.
        #[arg(long)]
        intervals: Option<String>,
        /// Print after renaming letters by first appearance.
        #[arg(long)]
        canonical: bool,
    },
    /// Enumerate the Squier component of a word.
    Squier { word: Option<String> },
    /// Ball in the median graph of diagrams.
    Ball {
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Center diagram script (default: the identity on the baseword).
        #[arg(long)]
        center: Option<String>,
    },
    /// Word problem: is the diagram trivial?
    Wp { script: String },
    /// Conjugacy of two spherical diagrams.
    Conj { a: String, b: String },
    /// Membership in the commutator subgroup.
    Comm { script: String },
    /// Roots of a spherical diagram.
    Roots { script: String },
    /// Power-sum canonical form.
    Psf { script: String },
    /// Generators and relators of the diagram group at the baseword.
    Present {
        #[arg(long = "max-len", default_value_t = 6)]
        max_len: usize,
    },
    /// Conspiciality of the Squier component of the baseword.
    Conspicial {
        /// Also print hyperplane labels and their crossing graph.
        #[arg(long)]
        crossing: bool,
    },
    /// Membership in the closure of a finitely generated subgroup.
    Closure {
        #[arg(long, num_args = 1..)]
        gens: Vec<String>,
        #[arg(long, num_args = 0..)]
        test: Vec<String>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Decided,
    Unknown,
}

struct Output {
    status: Status,
    text: String,
    json: Value,
    dot: Option<String>,
}

impl Output {
    fn new(status: Status, text: String, json: Value) -> Output {
        Output { status, text, json, dot: None }
    }
}

struct Context {
    presentation: Arc<Presentation>,
    baseword: Option<Word>,
    budget: Budget,
}

impl Context {
    fn base(&self) -> Result<&Word, CliError> {
        self.baseword.as_ref().ok_or_else(|| CliError::Input("no baseword: pass --base or add a `base` line".into()))
    }

    fn word(&self, text: &str) -> Result<Word, CliError> {
        self.presentation.parse_word(text).map_err(input)
    }

    fn diagram(&self, script: &str) -> Result<Diagram, CliError> {
        parse_script(&self.presentation, script).map_err(input)
    }

    fn spherical(&self, script: &str) -> Result<Diagram, CliError> {
        let d = self.diagram(script)?;
        if !d.is_spherical() {
            return Err(CliError::Input(format!("`{script}` is not spherical")));
        }
        Ok(d)
    }

    fn oracle(&self) -> WordOracle {
        WordOracle::new(self.presentation.clone(), &self.budget)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_source(path: Option<&Path>, builtin: Option<&str>) -> Result<Option<(Presentation, Option<Word>)>, CliError> {
    if let Some(path) = path {
        let f = parse_presentation(&read_file(path)?).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))?;
        return Ok(Some((f.presentation, f.baseword)));
    }
    if let Some(name) = builtin {
        let bp = constructions::builtin(name).map_err(input)?;
        return Ok(Some((bp.presentation, Some(bp.baseword))));
    }
    Ok(None)
}

fn context(cli: &Cli) -> Result<Context, CliError> {
    let Some((p, base)) = load_source(cli.presentation.as_deref(), cli.builtin.as_deref())? else {
        return Err(CliError::Input("pass --presentation <file> or --builtin <name>".into()));
    };
    let presentation = Arc::new(p);
    let baseword = match &cli.base {
        Some(b) => Some(presentation.parse_word(b).map_err(input)?),
        None => base,
    };
    let budget = Budget {
        max_words: cli.budget_words,
        max_steps: cli.budget_steps,
        max_frontier: cli.budget_frontier,
        max_witness_len: cli.budget_witness,
    };
    Ok(Context { presentation, baseword, budget })
}

fn diagram_json(d: &Diagram) -> Value {
    json!({
        "script": to_script(d),
        "cells": d.len(),
        "top": d.presentation().render(d.top()),
        "bottom": d.presentation().render(d.bottom()),
    })
}

fn validate(cx: &Context) -> Output {
    let p = &cx.presentation;
    let mut text = format!("letters: {}\nrelations: {}\n", p.symbols().join(" "), p.relations().len());
    for (i, r) in p.relations().iter().enumerate() {
        let _ = writeln!(text, "  r{i}: {} = {}", p.render(&r.left), p.render(&r.right));
    }
    if let Some(b) = &cx.baseword {
        let _ = writeln!(text, "base: {}", p.render(b));
    }
    let json = json!({
        "letters": p.symbols(),
        "relations": p.relations().iter().map(|r| [p.render(&r.left), p.render(&r.right)]).collect::<Vec<_>>(),
        "base": cx.baseword.as_ref().map(|b| p.render(b)),
    });
    Output::new(Status::Decided, text, json)
}

fn order_text(p: &Presentation, o: &ReductionOrder) -> String {
    match o {
        ReductionOrder::ShortLex => "shortlex".into(),
        ReductionOrder::Weighted(ws) => {
            let parts: Vec<String> = p.symbols().iter().zip(ws).map(|(s, w)| format!("{s}={w}")).collect();
            format!("weights {}", parts.join(" "))
        }
    }
}

fn complete_check(cx: &Context) -> Output {
    let p = &cx.presentation;
    let report = check_completeness(p, &cx.budget);
    let mut text = String::new();
    let term = match &report.terminating {
        Termination::Proven(o) => format!("proven ({})", order_text(p, o)),
        Termination::Disproven(l) => {
            let mut words = vec![p.render_compact(&l.start)];
            words.extend(l.steps.iter().map(|s| p.render_compact(&s.result)));
            format!("disproven ({})", words.join(" -> "))
        }
        Termination::Unknown => "unknown".into(),
    };
    let conf = match &report.locally_confluent {
        Confluence::Proven => "proven".to_string(),
        Confluence::Disproven(c) => format!(
            "disproven (rules r{} and r{} on {}: {} and {})",
            c.rules.0,
            c.rules.1,
            p.render_compact(&c.word),
            p.render_compact(&c.normal_forms.0),
            p.render_compact(&c.normal_forms.1)
        ),
        Confluence::Unknown => "unknown".into(),
    };
    let _ = writeln!(text, "termination: {term}");
    let _ = writeln!(text, "local confluence: {conf}");
    let _ = writeln!(text, "complete: {}", report.is_complete());
    let decided = report.is_complete()
        || matches!(report.terminating, Termination::Disproven(_))
        || matches!(report.locally_confluent, Confluence::Disproven(_));
    let json = json!({
        "termination": term,
        "local_confluence": conf,
        "complete": report.is_complete(),
    });
    Output::new(if decided { Status::Decided } else { Status::Unknown }, text, json)
}

fn nf(cx: &Context, word: &str) -> Result<Output, CliError> {
    let p = &cx.presentation;
    let w = cx.word(word)?;
    match check_termination(p, &cx.budget) {
        Termination::Proven(_) => {}
        _ => return Err(CliError::Input("presentation has no termination proof".into())),
    }
    let red = reduce_principal_left(&w, p, cx.budget.max_steps)
        .ok_or_else(|| CliError::Input("step budget exhausted".into()))?;
    let mut text = String::new();
    let mut prev = red.start.clone();
    for s in &red.steps {
        let _ = writeln!(text, "{} -> {}", p.render_compact(&prev), p.render_compact(&s.result));
        prev = s.result.clone();
    }
    if red.steps.is_empty() {
        let _ = writeln!(text, "{}", p.render_compact(&prev));
    }
    let json = json!({
        "start": p.render(&red.start),
        "trace": red.steps.iter().map(|s| json!({"position": s.position, "relation": s.relation, "result": p.render(&s.result)})).collect::<Vec<_>>(),
        "normal_form": p.render(red.result()),
    });
    Ok(Output::new(Status::Decided, text, json))
}

fn operand(s: &str) -> Result<BasedPresentation, CliError> {
    let path = Path::new(s);
    if path.exists() {
        let f = parse_presentation(&read_file(path)?).map_err(|e| CliError::Input(format!("{s}:{e}")))?;
        return f.into_based().ok_or_else(|| CliError::Input(format!("{s}: operand needs a `base` line")));
    }
    constructions::builtin(s).map_err(input)
}

fn parse_intervals(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.split_once('-').ok_or_else(|| CliError::Input(format!("bad interval `{t}`")))?;
            let a = a.trim().parse().map_err(input)?;
            let b = b.trim().parse().map_err(input)?;
            Ok((a, b))
        })
        .collect()
}

fn construct(op: &str, operands: &[String], n: Option<usize>, intervals: Option<&str>, canonical: bool) -> Result<Output, CliError> {
    let parts: Vec<BasedPresentation> = operands.iter().map(|s| operand(s)).collect::<Result<_, _>>()?;
    let arity = |k: usize| -> Result<(), CliError> {
        if parts.len() == k {
            Ok(())
        } else {
            Err(CliError::Input(format!("`{op}` takes {k} operand(s)")))
        }
    };
    let bp = match op {
        "free_product" => constructions::free_product(&parts),
        "direct_sum" => constructions::direct_sum(&parts),
        "countable_sum" => {
            let n = n.ok_or_else(|| CliError::Input("countable_sum needs --n".into()))?;
            constructions::countable_sum(&parts, n)
        }
        "wreath_z" => {
            arity(1)?;
            constructions::wreath_with_z(&parts[0])
        }
        "bullet" => {
            arity(2)?;
            constructions::bullet_product(&parts[0], &parts[1])
        }
        "square" => {
            arity(2)?;
            constructions::square_product(&parts[0], &parts[1])
        }
        "interval_raag" => {
            arity(0)?;
            let n = n.ok_or_else(|| CliError::Input("interval_raag needs --n".into()))?;
            constructions::interval_raag(n, &parse_intervals(intervals.unwrap_or(""))?)
        }
        name => {
            arity(0)?;
            constructions::builtin(name)
        }
    }
    .map_err(input)?;
    let text = if canonical {
        constructions::canonical_text(&bp)
    } else {
        format_presentation(&bp.presentation, Some(&bp.baseword), &bp.boundary)
    };
    let json = json!({ "presentation": text });
    Ok(Output::new(Status::Decided, text, json))
}

fn squier_cmd(cx: &Context, word: Option<&str>) -> Result<Output, CliError> {
    let w = match word {
        Some(s) => cx.word(s)?,
        None => cx.base()?.clone(),
    };
    let p = &cx.presentation;
    let comp = squier::enumerate_class(&w, p, &cx.budget);
    let mut text = format!(
        "vertices: {}\nedges: {}\nsquares: {}\n",
        comp.words.len(),
        comp.edges.len(),
        comp.squares.len()
    );
    if comp.complete {
        let _ = writeln!(text, "first homology rank: {}", comp.first_homology_rank());
    } else {
        let _ = writeln!(text, "truncated at {} words", cx.budget.max_words);
    }
    let status = if comp.complete { Status::Decided } else { Status::Unknown };
    let mut out = Output::new(status, text, comp.to_json(p));
    out.dot = Some(comp.to_dot(p));
    Ok(out)
}

fn ball(cx: &Context, radius: usize, center: Option<&str>) -> Result<Output, CliError> {
    let c = match center {
        Some(s) => cx.diagram(s)?,
        None => Diagram::identity(cx.presentation.clone(), cx.base()?.clone()),
    };
    let b = squier::median_ball(&c, radius, &cx.budget);
    let mut by_depth = vec![0usize; radius + 1];
    for &d in &b.depth {
        by_depth[d] += 1;
    }
    let mut text = format!("vertices: {}\nedges: {}\n", b.vertices.len(), b.edges.len());
    for (d, n) in by_depth.iter().enumerate() {
        let _ = writeln!(text, "  radius {d}: {n}");
    }
    if b.truncated {
        let _ = writeln!(text, "truncated at {} vertices", cx.budget.max_frontier);
    }
    let json = json!({
        "schema": "squier/1",
        "radius": radius,
        "vertices": b.vertices.iter().map(to_script).collect::<Vec<_>>(),
        "depth": b.depth,
        "edges": b.edges,
        "truncated": b.truncated,
    });
    let mut out = Output::new(if b.truncated { Status::Unknown } else { Status::Decided }, text, json);
    out.dot = Some(b.to_dot());
    Ok(out)
}

fn wp(cx: &Context, script: &str) -> Result<Output, CliError> {
    let d = cx.diagram(script)?;
    let trivial = ga::is_trivial(&d);
    let text = format!("{}\n", if trivial { "trivial" } else { "nontrivial" });
    let json = json!({ "trivial": trivial, "reduced": diagram_json(&d) });
    Ok(Output::new(Status::Decided, text, json))
}

fn conj(cx: &Context, a: &str, b: &str) -> Result<Output, CliError> {
    let (a, b) = (cx.spherical(a)?, cx.spherical(b)?);
    let oracle = cx.oracle();
    let out = match ga::conjugate(&a, &b, &oracle).map_err(input)? {
        Conjugacy::Conjugate(t) => Output::new(
            Status::Decided,
            format!("conjugate\nwitness: {}\n", to_script(&t)),
            json!({ "outcome": "conjugate", "witness": diagram_json(&t) }),
        ),
        Conjugacy::NotConjugate => {
            Output::new(Status::Decided, "not conjugate\n".into(), json!({ "outcome": "not_conjugate" }))
        }
        Conjugacy::Unknown => Output::new(Status::Unknown, "unknown\n".into(), json!({ "outcome": "unknown" })),
    };
    Ok(out)
}

fn comm(cx: &Context, script: &str) -> Result<Output, CliError> {
    let d = cx.spherical(script)?;
    let oracle = cx.oracle();
    let p = &cx.presentation;
    let alpha = ga::alpha(&d, &oracle);
    let m = ga::in_commutator_subgroup(&d, &oracle);
    let mut text = format!(
        "{}\n",
        match m {
            Membership::Yes => "in commutator subgroup",
            Membership::No => "not in commutator subgroup",
            Membership::Unknown => "unknown",
        }
    );
    let mut entries = Vec::new();
    if let Some(a) = &alpha {
        for ((l, r, rr), c) in &a.0 {
            let rel = p.relation(*r);
            let label = format!("({} | {} > {} | {})", p.render(l), p.render(&rel.left), p.render(&rel.right), p.render(rr));
            let _ = writeln!(text, "  {label}: {c}");
            entries.push(json!({ "label": label, "coefficient": c }));
        }
    }
    let status = if m == Membership::Unknown { Status::Unknown } else { Status::Decided };
    Ok(Output::new(status, text, json!({ "membership": format!("{m:?}").to_lowercase(), "alpha": entries })))
}

fn roots(cx: &Context, script: &str) -> Result<Output, CliError> {
    let d = cx.spherical(script)?;
    let r = ga::find_roots(&d, &cx.budget).map_err(input)?;
    let bound = ga::root_bound(&d, &cx.budget).map_err(input)?;
    let mut text = format!("bound: {bound}\n");
    for (g, k) in &r.roots {
        let _ = writeln!(text, "k={k}: {}", to_script(g));
    }
    if r.roots.is_empty() {
        text.push_str("no proper roots\n");
    }
    if !r.complete {
        text.push_str("search incomplete\n");
    }
    let json = json!({
        "bound": bound,
        "roots": r.roots.iter().map(|(g, k)| json!({"exponent": k, "root": diagram_json(g)})).collect::<Vec<_>>(),
        "complete": r.complete,
    });
    Ok(Output::new(if r.complete { Status::Decided } else { Status::Unknown }, text, json))
}

fn psf(cx: &Context, script: &str) -> Result<Output, CliError> {
    let d = cx.spherical(script)?;
    let f = ga::power_sum_form(&d, &cx.budget).map_err(input)?;
    let p = &cx.presentation;
    let mut text = format!("conjugator: {}\n", to_script(&f.conjugator));
    let mut slots = Vec::new();
    for s in &f.slots {
        match s {
            Slot::Trivial(w) => {
                let _ = writeln!(text, "  e[{}]", p.render(w));
                slots.push(json!({ "trivial": p.render(w) }));
            }
            Slot::Power(g, k) => {
                let _ = writeln!(text, "  ({})^{k}", to_script(g));
                slots.push(json!({ "power": k, "diagram": diagram_json(g) }));
            }
        }
    }
    Ok(Output::new(Status::Decided, text, json!({ "conjugator": diagram_json(&f.conjugator), "slots": slots })))
}

fn present(cx: &Context, max_len: usize) -> Result<Output, CliError> {
    let base = cx.base()?;
    let g = generate_presentation(&cx.presentation, base, max_len, &cx.budget).map_err(input)?;
    let mut text = g.render();
    if g.truncated {
        let _ = writeln!(text, "# truncated: words longer than {max_len} omitted");
    }
    let json = json!({
        "reoriented": g.reoriented,
        "generators": g.generators.iter().map(|e| e.render(&g.system)).collect::<Vec<_>>(),
        "relators": g.relators.iter().map(|r| r.render()).collect::<Vec<_>>(),
        "abelianization_rank": g.abelianization_rank(),
        "truncated": g.truncated,
    });
    Ok(Output::new(Status::Decided, text, json))
}

fn conspicial(cx: &Context, crossing: bool) -> Result<Output, CliError> {
    let base = cx.base()?;
    let oracle = cx.oracle();
    let p = &cx.presentation;
    let verdict = squier::check_conspicial(base, &oracle);
    let (mut text, mut json, status) = match &verdict {
        Conspiciality::Conspicial => ("conspicial\n".to_string(), json!({ "outcome": "conspicial" }), Status::Decided),
        Conspiciality::NotConspicial(w) => {
            let (t, j) = match w {
                ConspicialWitness::Osculation { a, b, p: q } => (
                    format!("osculation a={} b={} p={}", p.render(a), p.render(b), p.render(q)),
                    json!({ "kind": "osculation", "a": p.render(a), "b": p.render(b), "p": p.render(q) }),
                ),
                ConspicialWitness::Overlap { a, u, v, w, b, xi } => (
                    format!(
                        "overlap a={} u={} v={} w={} b={} xi={}",
                        p.render(a),
                        p.render(u),
                        p.render(v),
                        p.render(w),
                        p.render(b),
                        p.render(xi)
                    ),
                    json!({ "kind": "overlap", "a": p.render(a), "u": p.render(u), "v": p.render(v), "w": p.render(w), "b": p.render(b), "xi": p.render(xi) }),
                ),
            };
            (format!("not conspicial: {t}\n"), json!({ "outcome": "not_conspicial", "witness": j }), Status::Decided)
        }
        Conspiciality::Unknown => ("unknown\n".to_string(), json!({ "outcome": "unknown" }), Status::Unknown),
    };
    if crossing {
        let (labels, certain) = squier::hyperplanes(base, &oracle);
        let graph = squier::crossing_graph(&labels, &oracle);
        for (i, l) in labels.iter().enumerate() {
            let _ = writeln!(text, "h{i} {}", l.render(p));
        }
        match &graph {
            Some(g) => {
                for (i, row) in g.iter().enumerate() {
                    let adj: Vec<String> = row.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| format!("h{j}")).collect();
                    let _ = writeln!(text, "h{i} crosses: {}", adj.join(" "));
                }
            }
            None => text.push_str("crossing graph undecided\n"),
        }
        json["hyperplanes"] = json!(labels.iter().map(|l| l.render(p)).collect::<Vec<_>>());
        json["crossing"] = json!(graph);
        json["labels_complete"] = json!(certain);
    }
    Ok(Output::new(status, text, json))
}

fn closure(cx: &Context, gens: &[String], tests: &[String], seed: Option<u64>) -> Result<Output, CliError> {
    let base = cx.base()?;
    let gens: Vec<Diagram> = gens.iter().map(|s| cx.spherical(s)).collect::<Result<_, _>>()?;
    let wedge = folding::wedge_of_generators(&cx.presentation, base, &gens).map_err(input)?;
    let folded = match seed {
        Some(s) => folding::fold_randomized(&wedge, &mut ChaCha8Rng::seed_from_u64(s)),
        None => folding::fold(&wedge),
    };
    let mut text = format!(
        "folded complex: {} vertices, {} edges, {} cell pairs\n",
        folded.vertex_count(),
        folded.edges().len(),
        folded.cell_pairs().len()
    );
    let mut results = Vec::new();
    for t in tests {
        let d = cx.spherical(t)?;
        let ok = folding::accepts(&folded, &d);
        let _ = writeln!(text, "{} {t}", if ok { "accept" } else { "reject" });
        results.push(json!({ "diagram": t, "accepted": ok }));
    }
    let json = json!({
        "vertices": folded.vertex_count(),
        "edges": folded.edges().len(),
        "cell_pairs": folded.cell_pairs().len(),
        "tests": results,
    });
    let mut out = Output::new(Status::Decided, text, json);
    out.dot = Some(folded.to_dot());
    Ok(out)
}

fn verb(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::CompleteCheck => "complete-check",
        Command::Nf { .. } => "nf",
        Command::Construct { .. } => "construct",
        Command::Squier { .. } => "squier",
        Command::Ball { .. } => "ball",
        Command::Wp { .. } => "wp",
        Command::Conj { .. } => "conj",
        Command::Comm { .. } => "comm",
        Command::Roots { .. } => "roots",
        Command::Psf { .. } => "psf",
        Command::Present { .. } => "present",
        Command::Conspicial { .. } => "conspicial",
        Command::Closure { .. } => "closure",
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Command::Construct { op, operands, n, intervals, canonical } = &cli.command {
        return construct(op, operands, *n, intervals.as_deref(), *canonical);
    }
    let cx = context(cli)?;
    match &cli.command {
        Command::Validate => Ok(validate(&cx)),
        Command::CompleteCheck => Ok(complete_check(&cx)),
        Command::Nf { word } => nf(&cx, word),
        Command::Construct { .. } => unreachable!("handled above"),
        Command::Squier { word } => squier_cmd(&cx, word.as_deref()),
        Command::Ball { radius, center } => ball(&cx, *radius, center.as_deref()),
        Command::Wp { script } => wp(&cx, script),
        Command::Conj { a, b } => conj(&cx, a, b),
        Command::Comm { script } => comm(&cx, script),
        Command::Roots { script } => roots(&cx, script),
        Command::Psf { script } => psf(&cx, script),
        Command::Present { max_len } => present(&cx, *max_len),
        Command::Conspicial { crossing } => conspicial(&cx, *crossing),
        Command::Closure { gens, test } => closure(&cx, gens, test, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    let mut j = out.json;
                    if j.get("schema").is_none() {
                        j["schema"] = json!(format!("dgrp.{}/1", verb(&cli.command)));
                    }
                    j["budget"] = json!({
                        "words": cli.budget_words,
                        "steps": cli.budget_steps,
                        "frontier": cli.budget_frontier,
                        "witness": cli.budget_witness,
                    });
                    j["status"] = json!(if out.status == Status::Decided { "decided" } else { "unknown" });
                    println!("{}", serde_json::to_string_pretty(&j).expect("json values serialize"));
                }
                Format::Dot => match out.dot {
                    Some(d) => print!("{d}"),
                    None => {
                        eprintln!("error: `{}` has no DOT output", verb(&cli.command));
                        return ExitCode::from(1);
                    }
                },
            }
            match out.status {
                Status::Decided => ExitCode::SUCCESS,
                Status::Unknown => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
