//! The diagram script language used on the command line.
//!
//! ```text
//! expr    := sum (('*' | ';') sum)*
//! sum     := postfix ('+' postfix)*
//! postfix := primary ('~' | '^' integer)*
//! primary := '[' word '|' word '>' word '|' word ']' | 'e[' word ']' | '(' expr ')'
//! ```
//!
//! `*` and `;` both compose top to bottom, `+` places diagrams side by side,
//! `~` mirrors and `^k` takes powers of spherical diagrams. Words are
//! whitespace-separated letters, with `-` for the empty word.

use std::sync::Arc;

use crate::diagram::Diagram;
use crate::error::ScriptError;
use crate::presentation::{Letter, Presentation, Sign, Word};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    p: &'a Arc<Presentation>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ScriptError> {
        Err(ScriptError { column: self.src[..at].chars().count() + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ScriptError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected `{c}`"))
        }
    }

    /// Letters up to (not including) the next of `stops`.
    fn word_until(&mut self, stops: &[char]) -> Result<Vec<Letter>, ScriptError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].find(|c| stops.contains(&c)).unwrap_or(self.src.len() - start);
        self.pos = start + len;
        self.p.parse_letters(&self.src[start..start + len]).or_else(|e| self.err(start, e.to_string()))
    }

    fn expr(&mut self) -> Result<Diagram, ScriptError> {
        let mut acc = self.sum()?;
        loop {
            let at = self.pos;
            if !(self.eat('*') || self.eat(';')) {
                return Ok(acc);
            }
            let rhs = self.sum()?;
            acc = acc.concat(&rhs).or_else(|e| self.err(at, e.to_string()))?;
        }
    }

    fn sum(&mut self) -> Result<Diagram, ScriptError> {
        let mut acc = self.postfix()?;
        loop {
            let at = self.pos;
            if !self.eat('+') {
                return Ok(acc);
            }
            let rhs = self.postfix()?;
            acc = acc.sum(&rhs).or_else(|e| self.err(at, e.to_string()))?;
        }
    }

    fn postfix(&mut self) -> Result<Diagram, ScriptError> {
        let mut d = self.primary()?;
        loop {
            let at = self.pos;
            if self.eat('~') {
                d = d.inverse();
            } else if self.eat('^') {
                self.skip_ws();
                let start = self.pos;
                let digits = self.src[start..]
                    .char_indices()
                    .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
                    .count();
                self.pos += digits;
                let k: i64 = match self.src[start..self.pos].parse() {
                    Ok(k) => k,
                    Err(_) => return self.err(start, "expected an integer exponent"),
                };
                d = d.pow(k).or_else(|e| self.err(at, e.to_string()))?;
            } else {
                return Ok(d);
            }
        }
    }

    fn primary(&mut self) -> Result<Diagram, ScriptError> {
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let d = self.expr()?;
                self.expect(')')?;
                Ok(d)
            }
            Some('[') => {
                self.pos += 1;
                self.atomic(at)
            }
            Some('e') if self.src[self.pos + 1..].trim_start().starts_with('[') => {
                self.pos += 1;
                self.expect('[')?;
                let w = self.word_until(&[']'])?;
                self.expect(']')?;
                let w = Word::new(w).or_else(|e| self.err(at, e.to_string()))?;
                Ok(Diagram::identity(self.p.clone(), w))
            }
            Some(c) => self.err(self.pos, format!("unexpected `{c}`")),
            None => self.err(self.pos, "unexpected end of script"),
        }
    }

    fn atomic(&mut self, at: usize) -> Result<Diagram, ScriptError> {
        let a = self.word_until(&['|'])?;
        self.expect('|')?;
        let u = self.word_until(&['>'])?;
        self.expect('>')?;
        let v = self.word_until(&['|'])?;
        self.expect('|')?;
        let b = self.word_until(&[']'])?;
        self.expect(']')?;
        let found = self.p.relations().iter().enumerate().find_map(|(i, r)| {
            if r.left.letters() == u && r.right.letters() == v {
                Some((i, Sign::Pos))
            } else if r.right.letters() == u && r.left.letters() == v {
                Some((i, Sign::Neg))
            } else {
                None
            }
        });
        let Some((relation, sign)) = found else {
            return self.err(at, format!("no relation {} = {}", self.p.render(&u), self.p.render(&v)));
        };
        Diagram::atomic(self.p.clone(), &a, relation, sign, &b).or_else(|e| self.err(at, e.to_string()))
    }
}

pub fn parse_script(p: &Arc<Presentation>, src: &str) -> Result<Diagram, ScriptError> {
    let mut parser = Parser { src, pos: 0, p };
    let d = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err(parser.pos, "trailing input");
    }
    Ok(d)
}

/// The canonical cell sequence as `;`-separated atomic factors, or `e[w]`
/// for an identity diagram. Parsing the output gives back `d`.
pub fn to_script(d: &Diagram) -> String {
    let p = d.presentation();
    if d.is_empty() {
        return format!("e[{}]", p.render(d.top()));
    }
    let words = d.words();
    d.cells()
        .iter()
        .zip(&words)
        .map(|(c, w)| {
            let r = p.relation(c.relation);
            let (u, v) = (r.pattern(c.sign), r.image(c.sign));
            format!("[{} | {} > {} | {}]", p.render(&w[..c.offset]), p.render(u), p.render(v), p.render(&w[c.offset + u.len()..]))
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}
