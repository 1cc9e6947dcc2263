//! Finite presentations, their triangle cost, fan triangulation, and the
//! text format.
//!
//! Text grammar (whitespace insignificant except as a separator):
//!
//! ```text
//! presentation := "<" [ident ("," ident)*] "|" [relation ("," relation)*] ">"
//! relation     := word ["=" word]          (u = v is stored as u v^-1)
//! word         := factor+
//! factor       := ident ["^" int] | "(" word ")" ["^" int] | "1"
//! ident        := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Exponents are expanded while parsing; negative exponents invert.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Letter, Word};

/// Upper bound on the number of letters a single parse may expand to.
pub const MAX_EXPANDED_LETTERS: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{name}` at line {line}, column {column}")]
    UnknownGenerator {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("duplicate generator `{name}` at line {line}, column {column}")]
    DuplicateGenerator {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("exponent expansion exceeds {MAX_EXPANDED_LETTERS} letters")]
    TooLong,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("relator {relator} references generator {generator} but only {count} exist")]
    LetterOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
}

/// Number of triangles in the presentation complex: `sum max(0, |r| - 2)`
/// over cyclically reduced relators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct TriangleCost(pub u64);

impl TriangleCost {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for TriangleCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Cost contributed by one relator.
pub fn relator_cost(relator: &Word) -> u64 {
    relator.cyclic_reduce().len().saturating_sub(2) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for name in &generator_names {
            if !is_identifier(name) {
                return Err(PresentationError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let count = generator_names.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= count) {
                return Err(PresentationError::LetterOutOfRange {
                    relator: i,
                    generator: g,
                    count,
                });
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    /// Presentation with generators named `prefix1, prefix2, ...`.
    pub fn with_numbered_generators(prefix: &str, count: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Self::new((1..=count).map(|i| format!("{prefix}{i}")).collect(), relators)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).presentation()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    pub fn tcost(&self) -> TriangleCost {
        TriangleCost(self.relators.iter().map(relator_cost).sum())
    }

    /// `1 - #generators + #relators`, the Euler characteristic of the
    /// presentation complex.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.generator_count() as i64 + self.relator_count() as i64
    }

    /// Every relator has length at most 3.
    pub fn is_triangular(&self) -> bool {
        self.relators.iter().all(|r| r.len() <= 3)
    }

    /// Disjoint union of generators and relators; the presentation of the
    /// free product. Names of `other` are suffixed with `_2`, `_3`, ... when
    /// they collide with names already present.
    pub fn wedge(&self, other: &Presentation) -> Presentation {
        let mut names = self.generator_names.clone();
        let mut taken: BTreeSet<String> = names.iter().cloned().collect();
        for name in &other.generator_names {
            let mut candidate = name.clone();
            let mut k = 2;
            while taken.contains(&candidate) {
                candidate = format!("{name}_{k}");
                k += 1;
            }
            taken.insert(candidate.clone());
            names.push(candidate);
        }
        let shift = self.generator_count();
        let mut relators = self.relators.clone();
        relators.extend(other.relators.iter().map(|r| {
            r.iter()
                .map(|l| Letter::new(l.generator() + shift, l.is_inverse()))
                .collect::<Word>()
        }));
        Presentation {
            generator_names: names,
            relators,
        }
    }

    pub fn word_to_string(&self, word: &Word) -> String {
        write_word(&self.generator_names, word)
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let mut parser = Parser::new(text);
        let index: HashMap<&str, usize> = self
            .generator_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let word = parser.relation(&index)?;
        parser.skip_ws();
        if parser.pos < parser.chars.len() {
            return Err(parser.syntax("unexpected trailing input"));
        }
        Ok(word)
    }

    /// Fan triangulation: every relator longer than 3 letters (after cyclic
    /// reduction) is split into `k - 2` triangles through new generators.
    /// Relators of length at most 3 are kept verbatim.
    pub fn triangulate(&self) -> Triangulation {
        let mut names = self.generator_names.clone();
        let mut taken: BTreeSet<String> = names.iter().cloned().collect();
        let mut counter = 0usize;
        let mut fresh = |names: &mut Vec<String>| -> usize {
            loop {
                counter += 1;
                let candidate = format!("t{counter}");
                if taken.insert(candidate.clone()) {
                    names.push(candidate);
                    return names.len() - 1;
                }
            }
        };

        let mut relators = Vec::with_capacity(self.relators.len());
        let mut auxiliary = Vec::new();
        for r in &self.relators {
            if r.len() <= 3 {
                relators.push(r.clone());
                continue;
            }
            let r = r.cyclic_reduce();
            let k = r.len();
            if k <= 3 {
                relators.push(r);
                continue;
            }
            // r = l1 l2 ... lk; t_i stands for (l1 ... l_{i+1})^-1.
            let mut previous: Option<usize> = None;
            for i in 0..k - 3 {
                let t = fresh(&mut names);
                let prefix: Word = r[..i + 2].to_vec().into();
                auxiliary.push(AuxiliaryGenerator {
                    generator: t,
                    expression: prefix.inverse(),
                });
                let mut tri = vec![Letter::pos(t)];
                match previous {
                    None => tri.extend_from_slice(&r[0..2]),
                    Some(p) => {
                        tri.push(Letter::neg(p));
                        tri.push(r[i + 1]);
                    }
                }
                relators.push(tri.into());
                previous = Some(t);
            }
            let last = previous.expect("k >= 4 introduces at least one generator");
            relators.push(vec![Letter::neg(last), r[k - 2], r[k - 1]].into());
        }
        Triangulation {
            presentation: Presentation {
                generator_names: names,
                relators,
            },
            auxiliary,
        }
    }
}

/// A generator introduced by [`Presentation::triangulate`], together with
/// the word in the original generators it abbreviates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGenerator {
    pub generator: usize,
    pub expression: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub presentation: Presentation,
    pub auxiliary: Vec<AuxiliaryGenerator>,
}

fn write_word(names: &[String], word: &Word) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let l = word[i];
        let mut run = 1;
        while i + run < word.len() && word[i + run] == l {
            run += 1;
        }
        let name = &names[l.generator()];
        let exp = if l.is_inverse() { -(run as i64) } else { run as i64 };
        parts.push(if exp == 1 { name.clone() } else { format!("{name}^{exp}") });
        i += run;
    }
    parts.join(" ")
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator_names.is_empty() {
            write!(f, "< |")?;
        } else {
            write!(f, "< {} |", self.generator_names.join(", "))?;
        }
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| write_word(&self.generator_names, r))
            .collect();
        if rels.is_empty() {
            write!(f, " >")
        } else {
            write!(f, " {} >", rels.join(", "))
        }
    }
}

impl FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Presentation::parse(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    expanded: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            expanded: 0,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn syntax(&self, message: &str) -> ParseError {
        let (line, column) = self.location(self.pos);
        ParseError::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(self.syntax("expected identifier")),
        }
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.syntax("expected integer exponent"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.syntax("exponent out of range")
        })
    }

    fn presentation(&mut self) -> Result<Presentation, ParseError> {
        self.expect('<')?;
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        if self.peek() != Some('|') {
            loop {
                let (name, at) = self.ident()?;
                if index.contains_key(&name) {
                    let (line, column) = self.location(at);
                    return Err(ParseError::DuplicateGenerator { name, line, column });
                }
                index.insert(name.clone(), names.len());
                names.push(name);
                if self.peek() == Some(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect('|')?;
        let lookup: HashMap<&str, usize> = index.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        let mut relators = Vec::new();
        if self.peek() != Some('>') {
            loop {
                relators.push(self.relation(&lookup)?);
                if self.peek() == Some(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect('>')?;
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.syntax("unexpected trailing input"));
        }
        Ok(Presentation {
            generator_names: names,
            relators,
        })
    }

    fn relation(&mut self, index: &HashMap<&str, usize>) -> Result<Word, ParseError> {
        let lhs = self.word(index)?;
        if self.peek() == Some('=') {
            self.pos += 1;
            let rhs = self.word(index)?;
            return Ok(lhs.concat(&rhs.inverse()));
        }
        Ok(lhs)
    }

    fn word(&mut self, index: &HashMap<&str, usize>) -> Result<Word, ParseError> {
        let mut letters: Vec<Letter> = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == '(' || c == '1' => {
                    let factor = self.factor(index)?;
                    letters.extend_from_slice(&factor);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.syntax("expected a word"));
        }
        Ok(letters.into())
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if self.peek() == Some('^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn charge(&mut self, letters: usize) -> Result<(), ParseError> {
        self.expanded = self.expanded.saturating_add(letters);
        if self.expanded > MAX_EXPANDED_LETTERS {
            Err(ParseError::TooLong)
        } else {
            Ok(())
        }
    }

    fn factor(&mut self, index: &HashMap<&str, usize>) -> Result<Word, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.word(index)?;
                self.expect(')')?;
                let e = self.exponent()?;
                self.charge(inner.len().saturating_mul(e.unsigned_abs() as usize))?;
                Ok(inner.power(e))
            }
            Some('1') => {
                let start = self.pos;
                self.pos += 1;
                if matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos = start;
                    return Err(self.syntax("identifiers must start with a letter"));
                }
                Ok(Word::empty())
            }
            _ => {
                let (name, at) = self.ident()?;
                let Some(&g) = index.get(name.as_str()) else {
                    let (line, column) = self.location(at);
                    return Err(ParseError::UnknownGenerator { name, line, column });
                };
                let e = self.exponent()?;
                self.charge(e.unsigned_abs() as usize)?;
                Ok(Word::new(vec![Letter::pos(g)]).power(e))
            }
        }
    }
}
