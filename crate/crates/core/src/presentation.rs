//! Finite presentations and their text format.
//!
//! ```text
//! presentation := '<' generator (',' generator)* '|' [relation (',' relation)*] '>'
//! generator    := a single ASCII letter
//! relation     := word ['=' word]
//! word         := '1' | factor+
//! factor       := atom ['^' integer]
//! atom         := generator | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! Juxtaposition is multiplication, `[x,y] = x⁻¹y⁻¹xy`, and a relation
//! `u = v` stands for the relator `uv⁻¹`. Whitespace and `*` are ignored.
//! [`Presentation`]'s `Display` prints the canonical form; parsing that form
//! gives back an identical value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    Gen(char),
    Group(Word),
    Comm(Word, Word),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub atom: Atom,
    pub exp: i64,
}

/// A product of factors; empty means the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word(pub Vec<Factor>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<char>,
    pub relations: Vec<Relation>,
}

/// A letter of a free group: generator index and whether it is inverted.
pub type Letter = (usize, bool);

impl Word {
    pub fn gen(c: char) -> Word {
        Word(vec![Factor {
            atom: Atom::Gen(c),
            exp: 1,
        }])
    }

    /// Expands to freely reduced letters over the given generator names.
    pub fn letters(&self, generators: &[char]) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        self.expand_into(generators, &mut out)?;
        Ok(free_reduce(out))
    }

    fn expand_into(&self, generators: &[char], out: &mut Vec<Letter>) -> Result<()> {
        for f in &self.0 {
            let base = match &f.atom {
                Atom::Gen(c) => {
                    let i = generators.iter().position(|g| g == c).ok_or_else(|| {
                        GroupError::Input(format!("relator mentions undeclared generator {c:?}"))
                    })?;
                    vec![(i, false)]
                }
                Atom::Group(w) => w.letters(generators)?,
                Atom::Comm(x, y) => {
                    let x = x.letters(generators)?;
                    let y = y.letters(generators)?;
                    let mut c = invert(&x);
                    c.extend(invert(&y));
                    c.extend(x);
                    c.extend(y);
                    c
                }
            };
            let piece = if f.exp < 0 { invert(&base) } else { base };
            for _ in 0..f.exp.unsigned_abs() {
                out.extend(piece.iter().copied());
            }
        }
        Ok(())
    }
}

fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

fn free_reduce(w: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in w {
        if let Some(&last) = out.last() {
            if last.0 == l.0 && last.1 != l.1 {
                out.pop();
                continue;
            }
        }
        out.push(l);
    }
    out
}

impl Presentation {
    /// Relators as letter sequences; a relation `u = v` becomes `uv⁻¹`.
    pub fn relators(&self) -> Result<Vec<Vec<Letter>>> {
        let mut out = Vec::new();
        for r in &self.relations {
            let mut w = r.lhs.letters(&self.generators)?;
            if let Some(rhs) = &r.rhs {
                w.extend(invert(&rhs.letters(&self.generators)?));
            }
            let w = free_reduce(w);
            if !w.is_empty() {
                out.push(w);
            }
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut p = Parser::new(text);
        let pres = p.presentation()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input after '>'"));
        }
        Ok(pres)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut p = Parser::new(text);
        let w = p.word()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input after word"));
        }
        w.letters(&self.generators)?;
        Ok(w)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> GroupError {
        let consumed: String = self.chars[..self.pos.min(self.chars.len())]
            .iter()
            .collect();
        let line = consumed.matches('\n').count() + 1;
        let col = consumed
            .rsplit('\n')
            .next()
            .map(|s| s.chars().count())
            .unwrap_or(0)
            + 1;
        GroupError::Parse {
            line,
            col,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == '*')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn presentation(&mut self) -> Result<Presentation> {
        self.expect('<')?;
        let mut generators = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    if generators.contains(&c) {
                        return Err(self.error(&format!("generator {c:?} declared twice")));
                    }
                    generators.push(c);
                    self.pos += 1;
                }
                _ => return Err(self.error("expected a generator letter")),
            }
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('|') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or '|'")),
            }
        }
        let mut relations = Vec::new();
        if self.peek() == Some('>') {
            self.pos += 1;
            return Ok(Presentation {
                generators,
                relations,
            });
        }
        loop {
            let lhs = self.word()?;
            let rhs = if self.peek() == Some('=') {
                self.pos += 1;
                Some(self.word()?)
            } else {
                None
            };
            let rel = Relation { lhs, rhs };
            let at = self.pos;
            let mut check = Vec::new();
            rel.lhs.expand_into(&generators, &mut check).map_err(|e| {
                self.pos = at;
                self.error(&e.to_string())
            })?;
            if let Some(r) = &rel.rhs {
                r.expand_into(&generators, &mut check)
                    .map_err(|e| self.error(&e.to_string()))?;
            }
            relations.push(rel);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('>') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or '>'")),
            }
        }
        Ok(Presentation {
            generators,
            relations,
        })
    }

    fn word(&mut self) -> Result<Word> {
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(Word::default());
        }
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            let atom = if c.is_ascii_alphabetic() {
                self.pos += 1;
                Atom::Gen(c)
            } else if c == '(' {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Atom::Group(w)
            } else if c == '[' {
                self.pos += 1;
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(']')?;
                Atom::Comm(x, y)
            } else {
                break;
            };
            let exp = if self.peek() == Some('^') {
                self.pos += 1;
                self.integer()?
            } else {
                1
            };
            factors.push(Factor { atom, exp });
        }
        if factors.is_empty() {
            return Err(self.error("expected a word"));
        }
        Ok(Word(factors))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| self.error("expected an integer exponent"))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for factor in &self.0 {
            match &factor.atom {
                Atom::Gen(c) => write!(f, "{c}")?,
                Atom::Group(w) => write!(f, "({w})")?,
                Atom::Comm(x, y) => write!(f, "[{x},{y}]")?,
            }
            if factor.exp != 1 {
                write!(f, "^{}", factor.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, " |")?;
        for (i, r) in self.relations.iter().enumerate() {
            write!(f, "{}", if i == 0 { " " } else { ", " })?;
            write!(f, "{}", r.lhs)?;
            if let Some(rhs) = &r.rhs {
                write!(f, " = {rhs}")?;
            }
        }
        write!(f, ">")
    }
}
