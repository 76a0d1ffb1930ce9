//! Alphabets, positive words and semigroup presentations.
//!
//! Letters are identified by their rank in the declaration order of the
//! alphabet, so comparing two [`Letter`]s compares their ranks and the derived
//! ShortLex order on words needs no extra lookup.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{ParseError, ParseErrorKind, PresentationError};

/// A letter, identified by its rank in the alphabet's total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

/// Compares two letter sequences in ShortLex order: shorter first, then
/// lexicographically by rank.
pub fn shortlex(u: &[Letter], v: &[Letter]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// A positive (non-empty) word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds a word, rejecting the empty sequence.
    pub fn new(letters: Vec<Letter>) -> Result<Word, PresentationError> {
        if letters.is_empty() {
            return Err(PresentationError::EmptyWord);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }
}

impl std::ops::Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Words are ordered by ShortLex.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

/// Which side of a relation a cell consumes: `Pos` rewrites left to right,
/// `Neg` rewrites right to left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// A defining relation `left = right`. Its index is its position in
/// [`Presentation::relations`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub left: Word,
    pub right: Word,
}

impl Relation {
    /// The side a cell of the given sign consumes.
    pub fn pattern(&self, sign: Sign) -> &Word {
        match sign {
            Sign::Pos => &self.left,
            Sign::Neg => &self.right,
        }
    }

    /// The side a cell of the given sign produces.
    pub fn image(&self, sign: Sign) -> &Word {
        match sign {
            Sign::Pos => &self.right,
            Sign::Neg => &self.left,
        }
    }

    /// Length of the produced side minus length of the consumed side.
    pub fn delta(&self, sign: Sign) -> isize {
        self.image(sign).len() as isize - self.pattern(sign).len() as isize
    }
}

/// A semigroup presentation `⟨Σ | R⟩` with a totally ordered alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    symbols: Vec<String>,
    lookup: HashMap<String, Letter>,
    relations: Vec<Relation>,
}

fn valid_symbol(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| {
            c.is_whitespace() || matches!(c, '#' | '=' | '^' | '|' | '>' | '[' | ']' | '(' | ')' | ';' | '*' | '+' | '~' | ',')
        })
        && s != "-"
}

impl Presentation {
    /// Builds a presentation from symbols (in rank order) and relations given
    /// as letter sequences.
    pub fn new(
        symbols: Vec<String>,
        relations: Vec<(Vec<Letter>, Vec<Letter>)>,
    ) -> Result<Presentation, PresentationError> {
        let mut lookup = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if !valid_symbol(s) {
                return Err(PresentationError::InvalidSymbol(s.clone()));
            }
            if lookup.insert(s.clone(), Letter(i as u32)).is_some() {
                return Err(PresentationError::DuplicateLetter(s.clone()));
            }
        }
        let n = symbols.len() as u32;
        let mut rels: Vec<Relation> = Vec::with_capacity(relations.len());
        for (l, r) in relations {
            if l.iter().chain(r.iter()).any(|x| x.0 >= n) {
                return Err(PresentationError::UnknownLetter(format!("{:?}", l.iter().chain(r.iter()).find(|x| x.0 >= n))));
            }
            let left = Word::new(l)?;
            let right = Word::new(r)?;
            if left == right {
                return Err(PresentationError::TrivialRelation(render(&symbols, &left)));
            }
            if rels.iter().any(|q| q.left == right && q.right == left) {
                return Err(PresentationError::MirroredRelation(
                    render(&symbols, &left),
                    render(&symbols, &right),
                ));
            }
            rels.push(Relation { left, right });
        }
        Ok(Presentation { symbols, lookup, relations: rels })
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, index: usize) -> &Relation {
        &self.relations[index]
    }

    pub fn alphabet_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, l: Letter) -> &str {
        &self.symbols[l.rank()]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.lookup.get(symbol).copied()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.symbols.len() as u32).map(Letter)
    }

    /// Parses whitespace-separated tokens (with optional `^k` powers) into a
    /// possibly empty letter sequence.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>, PresentationError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "-" {
                continue;
            }
            let (sym, times) = split_power(tok).map_err(|_| PresentationError::UnknownLetter(tok.to_string()))?;
            let l = self.letter(sym).ok_or_else(|| PresentationError::UnknownLetter(sym.to_string()))?;
            out.extend(std::iter::repeat_n(l, times));
        }
        Ok(out)
    }

    /// Parses a positive word.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        Word::new(self.parse_letters(text)?)
    }

    /// Renders letters as space-separated tokens; the empty sequence is `-`.
    pub fn render(&self, w: &[Letter]) -> String {
        render(&self.symbols, w)
    }

    /// Renders letters with runs collapsed into powers, e.g. `a b a^3`.
    pub fn render_compact(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "-".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let s = self.symbol(w[i]);
            if j - i == 1 {
                parts.push(s.to_string());
            } else {
                parts.push(format!("{}^{}", s, j - i));
            }
            i = j;
        }
        parts.join(" ")
    }

    /// The same alphabet with every relation oriented so that its left side
    /// is the ShortLex-larger one.
    pub fn shortlex_oriented(&self) -> Presentation {
        let relations = self
            .relations
            .iter()
            .map(|r| {
                if shortlex(&r.left, &r.right) == Ordering::Less {
                    Relation { left: r.right.clone(), right: r.left.clone() }
                } else {
                    r.clone()
                }
            })
            .collect();
        Presentation { symbols: self.symbols.clone(), lookup: self.lookup.clone(), relations }
    }

    /// Whether every relation already has its ShortLex-larger side on the left.
    pub fn is_shortlex_oriented(&self) -> bool {
        self.relations.iter().all(|r| shortlex(&r.left, &r.right) == Ordering::Greater)
    }
}

fn render(symbols: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "-".into();
    }
    w.iter().map(|l| symbols[l.rank()].as_str()).collect::<Vec<_>>().join(" ")
}

fn split_power(tok: &str) -> Result<(&str, usize), ()> {
    match tok.split_once('^') {
        None => Ok((tok, 1)),
        Some((s, k)) => {
            let k: usize = k.parse().map_err(|_| ())?;
            if k == 0 || s.is_empty() {
                return Err(());
            }
            Ok((s, k))
        }
    }
}

/// A presentation together with a baseword: the data `(P, w)` of a diagram group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedPresentation {
    pub presentation: Presentation,
    pub baseword: Word,
    /// Letters at the truncation boundary of a materialized infinite family.
    pub boundary: Vec<Letter>,
}

impl BasedPresentation {
    pub fn new(presentation: Presentation, baseword: Word) -> BasedPresentation {
        BasedPresentation { presentation, baseword, boundary: Vec::new() }
    }
}

/// Result of parsing a presentation file: the presentation plus optional
/// `base` and `boundary` directives.
#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub baseword: Option<Word>,
    pub boundary: Vec<Letter>,
}

impl PresentationFile {
    pub fn into_based(self) -> Option<BasedPresentation> {
        let baseword = self.baseword?;
        Some(BasedPresentation { presentation: self.presentation, baseword, boundary: self.boundary })
    }
}

/// Parses the line-oriented presentation format.
///
/// ```text
/// # Thompson's group F
/// letters x
/// rule x = x x
/// base x
/// ```
pub fn parse_presentation(text: &str) -> Result<PresentationFile, ParseError> {
    let mut symbols: Option<(Vec<String>, usize)> = None;
    let mut rules: Vec<(usize, usize, String, String)> = Vec::new();
    let mut base: Option<(usize, usize, String)> = None;
    let mut boundary: Option<(usize, usize, String)> = None;
    let err = |line: usize, column: usize, kind: ParseErrorKind| ParseError { line, column, kind };

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed.trim_end(), ""),
        };
        let rest_col = indent + keyword.len() + 1;
        let col_of = |offset: usize| content[..offset].chars().count() + 1;
        match keyword {
            "letters" => {
                if symbols.is_some() {
                    return Err(err(line_no, col_of(indent), ParseErrorKind::RepeatedLetters));
                }
                let mut syms = Vec::new();
                let mut offset = rest_col - 1;
                for tok in rest.split_whitespace() {
                    let pos = content[offset..].find(tok).map(|p| p + offset).unwrap_or(offset);
                    offset = pos + tok.len();
                    if !valid_symbol(tok) {
                        return Err(err(line_no, col_of(pos), ParseErrorKind::InvalidSymbol(tok.into())));
                    }
                    if syms.iter().any(|s: &String| s == tok) {
                        return Err(err(line_no, col_of(pos), ParseErrorKind::DuplicateLetter(tok.into())));
                    }
                    syms.push(tok.to_string());
                }
                if syms.is_empty() {
                    return Err(err(line_no, col_of(indent), ParseErrorKind::EmptyAlphabet));
                }
                symbols = Some((syms, line_no));
            }
            "rule" => {
                let Some(eq) = rest.find('=') else {
                    return Err(err(line_no, col_of(indent), ParseErrorKind::MissingEquals));
                };
                if rest[eq + 1..].contains('=') {
                    let second = rest_col - 1 + eq + 1 + rest[eq + 1..].find('=').unwrap_or(0);
                    return Err(err(line_no, col_of(second), ParseErrorKind::MissingEquals));
                }
                rules.push((line_no, rest_col - 1, rest[..eq].to_string(), rest[eq + 1..].to_string()));
            }
            "base" => {
                base = Some((line_no, rest_col - 1, rest.to_string()));
            }
            "boundary" => {
                boundary = Some((line_no, rest_col - 1, rest.to_string()));
            }
            other => {
                return Err(err(line_no, col_of(indent), ParseErrorKind::UnknownDirective(other.into())));
            }
        }
    }

    let Some((syms, _)) = symbols else {
        return Err(err(1, 1, ParseErrorKind::MissingLetters));
    };
    let lookup: HashMap<&str, Letter> =
        syms.iter().enumerate().map(|(i, s)| (s.as_str(), Letter(i as u32))).collect();

    let resolve = |line: usize, start: usize, text: &str, full: &str| -> Result<Vec<Letter>, ParseError> {
        let mut out = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let pos = text[offset..].find(tok).map(|p| p + offset).unwrap_or(offset);
            offset = pos + tok.len();
            let col = full[..(start + pos).min(full.len())].chars().count() + 1;
            let (sym, k) = split_power(tok).map_err(|_| err(line, col, ParseErrorKind::UnknownLetter(tok.into())))?;
            let l = lookup.get(sym).ok_or_else(|| err(line, col, ParseErrorKind::UnknownLetter(sym.into())))?;
            out.extend(std::iter::repeat_n(*l, k));
        }
        Ok(out)
    };

    let lines: Vec<&str> = text.lines().collect();
    let mut rels = Vec::new();
    for (line, start, l, r) in &rules {
        let full = lines[line - 1].split('#').next().unwrap_or("");
        let left = resolve(*line, *start, l, full)?;
        let right_start = start + l.len() + 1;
        let right = resolve(*line, right_start, r, full)?;
        if left.is_empty() {
            return Err(err(*line, start + 1, ParseErrorKind::EmptyWord));
        }
        if right.is_empty() {
            return Err(err(*line, right_start + 1, ParseErrorKind::EmptyWord));
        }
        if left == right {
            return Err(err(*line, start + 1, ParseErrorKind::TrivialRelation));
        }
        if rels.iter().any(|(a, b): &(Vec<Letter>, Vec<Letter>)| *a == right && *b == left) {
            return Err(err(*line, start + 1, ParseErrorKind::MirroredRelation));
        }
        rels.push((left, right));
    }
    let presentation = Presentation::new(syms.clone(), rels).map_err(|e| err(1, 1, ParseErrorKind::Invalid(e.to_string())))?;

    let baseword = match base {
        None => None,
        Some((line, start, text_)) => {
            let full = lines[line - 1].split('#').next().unwrap_or("");
            let w = resolve(line, start, &text_, full)?;
            Some(Word::new(w).map_err(|_| err(line, start + 1, ParseErrorKind::EmptyWord))?)
        }
    };
    let boundary = match boundary {
        None => Vec::new(),
        Some((line, start, text_)) => {
            let full = lines[line - 1].split('#').next().unwrap_or("");
            resolve(line, start, &text_, full)?
        }
    };
    Ok(PresentationFile { presentation, baseword, boundary })
}

/// Renders a presentation (and optional baseword) in the file format.
pub fn format_presentation(p: &Presentation, baseword: Option<&[Letter]>, boundary: &[Letter]) -> String {
    let mut out = String::new();
    out.push_str("letters ");
    out.push_str(&p.symbols.join(" "));
    out.push('\n');
    for r in &p.relations {
        out.push_str(&format!("rule {} = {}\n", p.render(&r.left), p.render(&r.right)));
    }
    if let Some(b) = baseword {
        out.push_str(&format!("base {}\n", p.render(b)));
    }
    if !boundary.is_empty() {
        out.push_str(&format!("boundary {}\n", p.render(boundary)));
    }
    out
}

impl fmt::Display for BasedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_presentation(&self.presentation, Some(&self.baseword), &self.boundary))
    }
}
