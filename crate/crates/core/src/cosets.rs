//! Coset tables, Todd–Coxeter enumeration (HLT with lookahead) and the
//! low-index subgroups search.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;

/// Finitely many words generating a subgroup of the ambient group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub generator_words: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(generator_words: Vec<Word>) -> Self {
        SubgroupSpec { generator_words }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    /// The whole group: one word per generator.
    pub fn whole(generators: usize) -> Self {
        SubgroupSpec::new((0..generators).map(|g| Word::new(vec![Letter::pos(g)])).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("coset enumeration did not close within {max_cosets} cosets")]
    CapacityExceeded { max_cosets: usize },
    #[error("subgroup word references generator {generator}, presentation has {count}")]
    LetterOutOfRange { generator: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table has {found} generator columns, expected {expected}")]
    GeneratorMismatch { expected: usize, found: usize },
    #[error("action array has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("entry out of range at coset {coset}, column {column}")]
    OutOfRange { coset: usize, column: usize },
    #[error("generator {generator} does not act as a permutation")]
    NotPermutation { generator: usize },
    #[error("relator {relator} does not close at coset {coset}")]
    RelatorOpen { relator: usize, coset: usize },
    #[error("action is not transitive")]
    NotTransitive,
    #[error("index must be positive")]
    EmptyTable,
    #[error("invalid table json: {0}")]
    Json(String),
}

/// Complete right action of the generators on the cosets of a finite-index
/// subgroup. Cosets are `0..index` internally, with coset `0` the subgroup
/// itself; the JSON form uses 1-based ordinals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetTable {
    index: usize,
    generators: usize,
    /// Row-major, `2 * generators` columns in letter-code order.
    action: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CosetTableJson {
    index: usize,
    generators: usize,
    action: Vec<usize>,
}

impl CosetTable {
    /// Builds a table from the images of each generator (one permutation of
    /// `0..index` per generator); inverse columns are derived.
    pub fn from_permutations(index: usize, perms: &[Vec<usize>]) -> Result<Self, TableError> {
        if index == 0 {
            return Err(TableError::EmptyTable);
        }
        let generators = perms.len();
        let cols = 2 * generators;
        let mut action = vec![NONE; index * cols];
        for (g, perm) in perms.iter().enumerate() {
            if perm.len() != index {
                return Err(TableError::NotPermutation { generator: g });
            }
            for (c, &d) in perm.iter().enumerate() {
                if d >= index || action[d * cols + 2 * g + 1] != NONE {
                    return Err(TableError::NotPermutation { generator: g });
                }
                action[c * cols + 2 * g] = d as u32;
                action[d * cols + 2 * g + 1] = c as u32;
            }
        }
        Ok(CosetTable {
            index,
            generators,
            action,
        })
    }

    /// The one-coset table of the whole group.
    pub fn trivial(generators: usize) -> Self {
        CosetTable {
            index: 1,
            generators,
            action: vec![0; 2 * generators],
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn columns(&self) -> usize {
        2 * self.generators
    }

    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.action[coset * self.columns() + letter.code()] as usize
    }

    pub fn trace(&self, coset: usize, word: &[Letter]) -> usize {
        word.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Whether `word` lies in the subgroup.
    pub fn contains(&self, word: &Word) -> bool {
        self.trace(0, word) == 0
    }

    /// Image of each coset under a generator.
    pub fn permutation(&self, generator: usize) -> Vec<usize> {
        (0..self.index).map(|c| self.act(c, Letter::pos(generator))).collect()
    }

    /// Appends generators defined by words in the existing ones, e.g. the
    /// auxiliary generators introduced by triangulation.
    pub fn extend_with(&self, expressions: &[Word]) -> CosetTable {
        let mut perms: Vec<Vec<usize>> = (0..self.generators).map(|g| self.permutation(g)).collect();
        for w in expressions {
            perms.push((0..self.index).map(|c| self.trace(c, w)).collect());
        }
        CosetTable::from_permutations(self.index, &perms).expect("words act by permutations")
    }

    /// Checks the full invariant suite against a presentation: permutation
    /// action, every relator closes at every coset, transitivity.
    pub fn validate(&self, p: &Presentation) -> Result<(), TableError> {
        if self.generators != p.generator_count() {
            return Err(TableError::GeneratorMismatch {
                expected: p.generator_count(),
                found: self.generators,
            });
        }
        self.validate_action()?;
        for (i, r) in p.relators().iter().enumerate() {
            for c in 0..self.index {
                if self.trace(c, r) != c {
                    return Err(TableError::RelatorOpen { relator: i, coset: c });
                }
            }
        }
        Ok(())
    }

    fn validate_action(&self) -> Result<(), TableError> {
        if self.index == 0 {
            return Err(TableError::EmptyTable);
        }
        let cols = self.columns();
        if self.action.len() != self.index * cols {
            return Err(TableError::BadLength {
                expected: self.index * cols,
                found: self.action.len(),
            });
        }
        for c in 0..self.index {
            for x in 0..cols {
                let d = self.action[c * cols + x];
                if d as usize >= self.index {
                    return Err(TableError::OutOfRange { coset: c, column: x });
                }
                if self.action[d as usize * cols + (x ^ 1)] as usize != c {
                    return Err(TableError::NotPermutation { generator: x / 2 });
                }
            }
        }
        let mut seen = vec![false; self.index];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for x in 0..cols {
                let d = self.action[c * cols + x] as usize;
                if !seen[d] {
                    seen[d] = true;
                    count += 1;
                    stack.push(d);
                }
            }
        }
        if count != self.index {
            return Err(TableError::NotTransitive);
        }
        Ok(())
    }

    /// Renumbers cosets in order of first appearance scanning rows in order
    /// and columns in letter order, starting from `base`.
    pub fn standardized_from(&self, base: usize) -> CosetTable {
        let cols = self.columns();
        let mut map = vec![NONE; self.index];
        let mut order = vec![base];
        map[base] = 0;
        let mut row = 0;
        while row < order.len() {
            let old = order[row];
            for x in 0..cols {
                let t = self.action[old * cols + x] as usize;
                if map[t] == NONE {
                    map[t] = order.len() as u32;
                    order.push(t);
                }
            }
            row += 1;
        }
        let mut action = vec![0; self.action.len()];
        for (new, &old) in order.iter().enumerate() {
            for x in 0..cols {
                action[new * cols + x] = map[self.action[old * cols + x] as usize];
            }
        }
        CosetTable {
            index: self.index,
            generators: self.generators,
            action,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("plain data serializes")
    }

    fn to_json_value(&self) -> CosetTableJson {
        CosetTableJson {
            index: self.index,
            generators: self.generators,
            action: self.action.iter().map(|&d| d as usize + 1).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let raw: CosetTableJson = serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
        Self::from_json_value(raw)
    }

    fn from_json_value(raw: CosetTableJson) -> Result<Self, TableError> {
        let cols = 2 * raw.generators;
        if raw.action.len() != raw.index * cols {
            return Err(TableError::BadLength {
                expected: raw.index * cols,
                found: raw.action.len(),
            });
        }
        let mut action = Vec::with_capacity(raw.action.len());
        for (i, &d) in raw.action.iter().enumerate() {
            if d == 0 || d > raw.index {
                return Err(TableError::OutOfRange {
                    coset: i / cols.max(1),
                    column: i % cols.max(1),
                });
            }
            action.push((d - 1) as u32);
        }
        let table = CosetTable {
            index: raw.index,
            generators: raw.generators,
            action,
        };
        table.validate_action()?;
        Ok(table)
    }

    /// Parses either a single table object or an array of tables.
    pub fn list_from_json(text: &str) -> Result<Vec<Self>, TableError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
        let items = match value {
            serde_json::Value::Array(items) => items,
            other => vec![other],
        };
        items
            .into_iter()
            .map(|v| {
                let raw: CosetTableJson = serde_json::from_value(v).map_err(|e| TableError::Json(e.to_string()))?;
                Self::from_json_value(raw)
            })
            .collect()
    }

    pub fn list_to_json(tables: &[CosetTable]) -> String {
        let raw: Vec<CosetTableJson> = tables.iter().map(|t| t.to_json_value()).collect();
        serde_json::to_string(&raw).expect("plain data serializes")
    }
}

impl Serialize for CosetTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosetTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CosetTableJson::deserialize(d)?;
        Self::from_json_value(raw).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Todd–Coxeter
// ---------------------------------------------------------------------------

enum Step {
    Done,
    Full,
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
    max_rows: usize,
    relators: Vec<Vec<Letter>>,
}

impl Enumerator {
    fn new(p: &Presentation, max_cosets: usize) -> Self {
        let cols = 2 * p.generator_count();
        let relators = p
            .relators()
            .iter()
            .map(|r| r.cyclic_reduce().into_letters())
            .filter(|r| !r.is_empty())
            .collect();
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            live: 1,
            max_cosets,
            max_rows: max_cosets.saturating_mul(64).max(4096),
            relators,
        }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.table[c * self.cols + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = c;
        while self.parent[c] as usize != r {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), ()> {
        if self.live >= self.max_cosets || self.rows() >= self.max_rows {
            return Err(());
        }
        let d = self.rows();
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.live += 1;
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep as u32;
        self.live -= 1;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                self.set(d as usize, x ^ 1, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d as usize);
                let mux = self.get(mu, x);
                if mux != NONE {
                    self.merge(nu, mux as usize, &mut queue);
                } else {
                    let nux = self.get(nu, x ^ 1);
                    if nux != NONE {
                        self.merge(mu, nux as usize, &mut queue);
                    } else {
                        self.set(mu, x, nu as u32);
                        self.set(nu, x ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    /// HLT scan of `w` at coset `a`, defining cosets to close gaps.
    fn scan_and_fill(&mut self, a: usize, w: &[Letter]) -> Step {
        let n = w.len();
        let (mut f, mut i) = (a, 0usize);
        let (mut b, mut j) = (a, n);
        loop {
            while i < n && self.get(f, w[i].code()) != NONE {
                f = self.get(f, w[i].code()) as usize;
                i += 1;
            }
            if i == n {
                if f != a {
                    self.coincidence(f, a);
                }
                return Step::Done;
            }
            while j > i && self.get(b, w[j - 1].code() ^ 1) != NONE {
                b = self.get(b, w[j - 1].code() ^ 1) as usize;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Step::Done;
            }
            if j == i + 1 {
                let x = w[i].code();
                self.set(f, x, b as u32);
                self.set(b, x ^ 1, f as u32);
                return Step::Done;
            }
            if self.define(f, w[i].code()).is_err() {
                return Step::Full;
            }
        }
    }

    /// Scan without definitions: records deductions and coincidences only.
    fn scan(&mut self, a: usize, w: &[Letter]) {
        let n = w.len();
        let (mut f, mut i) = (a, 0usize);
        while i < n && self.get(f, w[i].code()) != NONE {
            f = self.get(f, w[i].code()) as usize;
            i += 1;
        }
        if i == n {
            if f != a {
                self.coincidence(f, a);
            }
            return;
        }
        let (mut b, mut j) = (a, n);
        while j > i && self.get(b, w[j - 1].code() ^ 1) != NONE {
            b = self.get(b, w[j - 1].code() ^ 1) as usize;
            j -= 1;
        }
        if j == i {
            self.coincidence(f, b);
        } else if j == i + 1 {
            let x = w[i].code();
            self.set(f, x, b as u32);
            self.set(b, x ^ 1, f as u32);
        }
    }

    fn lookahead(&mut self) {
        let relators = std::mem::take(&mut self.relators);
        for c in 0..self.rows() {
            for r in &relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, r);
            }
        }
        self.relators = relators;
    }

    /// Runs `step` until it completes, calling lookahead when the table is
    /// full. Fails if lookahead frees nothing.
    fn with_room(&mut self, mut step: impl FnMut(&mut Self) -> Step) -> Result<(), EnumerationError> {
        loop {
            match step(self) {
                Step::Done => return Ok(()),
                Step::Full => {
                    let before = self.live;
                    self.lookahead();
                    if self.live >= before && (self.live >= self.max_cosets || self.rows() >= self.max_rows) {
                        return Err(EnumerationError::CapacityExceeded {
                            max_cosets: self.max_cosets,
                        });
                    }
                }
            }
        }
    }

    fn run(&mut self, subgroup: &[Word]) -> Result<(), EnumerationError> {
        for w in subgroup {
            let w = w.free_reduce().into_letters();
            if w.is_empty() {
                continue;
            }
            self.with_room(|e| if e.is_live(0) { e.scan_and_fill(0, &w) } else { Step::Done })?;
        }
        let relators = self.relators.clone();
        let mut c = 0;
        while c < self.rows() {
            for r in &relators {
                self.with_room(|e| if e.is_live(c) { e.scan_and_fill(c, r) } else { Step::Done })?;
            }
            for x in 0..self.cols {
                self.with_room(|e| {
                    if e.is_live(c) && e.get(c, x) == NONE && e.define(c, x).is_err() {
                        return Step::Full;
                    }
                    Step::Done
                })?;
            }
            c += 1;
        }
        Ok(())
    }

    fn finish(mut self) -> CosetTable {
        let rows = self.rows();
        let mut map = vec![NONE; rows];
        let mut next = 0u32;
        for c in 0..rows {
            if self.is_live(c) {
                map[c] = next;
                next += 1;
            }
        }
        let index = next as usize;
        let mut action = Vec::with_capacity(index * self.cols);
        for c in 0..rows {
            if self.is_live(c) {
                for x in 0..self.cols {
                    let d = self.get(c, x);
                    let d = self.rep(d as usize);
                    action.push(map[d]);
                }
            }
        }
        CosetTable {
            index,
            generators: self.cols / 2,
            action,
        }
        .standardized_from(0)
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` by HLT
/// scanning with lookahead. The returned table is compacted and
/// standardized. Failing to close within `max_cosets` live cosets is
/// reported as [`EnumerationError::CapacityExceeded`]; it says nothing about
/// whether the index is infinite.
pub fn todd_coxeter(p: &Presentation, subgroup: &SubgroupSpec, max_cosets: usize) -> Result<CosetTable, EnumerationError> {
    let count = p.generator_count();
    for w in &subgroup.generator_words {
        if let Some(g) = w.max_generator().filter(|&g| g >= count) {
            return Err(EnumerationError::LetterOutOfRange { generator: g, count });
        }
    }
    if count == 0 {
        return Ok(CosetTable::trivial(0));
    }
    let mut e = Enumerator::new(p, max_cosets.max(1));
    e.run(&subgroup.generator_words)?;
    Ok(e.finish())
}

// ---------------------------------------------------------------------------
// Low-index subgroups
// ---------------------------------------------------------------------------

struct LowIndex {
    cols: usize,
    max_index: usize,
    table: Vec<u32>,
    cosets: usize,
    trail: Vec<usize>,
    /// Cyclic conjugates of relators and their inverses, by first letter.
    conjugates: Vec<Vec<Vec<Letter>>>,
    found: Vec<CosetTable>,
}

impl LowIndex {
    fn new(p: &Presentation, max_index: usize) -> Self {
        let cols = 2 * p.generator_count();
        let mut conjugates = vec![Vec::new(); cols];
        let mut seen = std::collections::HashSet::new();
        for r in p.relators() {
            let r = r.cyclic_reduce();
            if r.is_empty() {
                continue;
            }
            for base in [r.clone(), r.inverse()] {
                for k in 0..base.len() {
                    let c = base.rotate(k).into_letters();
                    if seen.insert(c.clone()) {
                        conjugates[c[0].code()].push(c);
                    }
                }
            }
        }
        LowIndex {
            cols,
            max_index,
            table: vec![NONE; max_index * cols],
            cosets: 1,
            trail: Vec::new(),
            conjugates,
            found: Vec::new(),
        }
    }

    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    fn assign(&mut self, c: usize, x: usize, d: usize, queue: &mut Vec<(usize, usize)>) {
        self.table[c * self.cols + x] = d as u32;
        self.table[d * self.cols + (x ^ 1)] = c as u32;
        self.trail.push(c * self.cols + x);
        self.trail.push(d * self.cols + (x ^ 1));
        queue.push((c, x));
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let pos = self.trail.pop().unwrap();
            self.table[pos] = NONE;
        }
    }

    /// Scans `w` at `a`; `false` on a contradiction.
    fn scan(&mut self, a: usize, w: &[Letter], queue: &mut Vec<(usize, usize)>) -> bool {
        let n = w.len();
        let (mut f, mut i) = (a, 0usize);
        while i < n {
            let d = self.get(f, w[i].code());
            if d == NONE {
                break;
            }
            f = d as usize;
            i += 1;
        }
        if i == n {
            return f == a;
        }
        let (mut b, mut j) = (a, n);
        while j > i {
            let d = self.get(b, w[j - 1].code() ^ 1);
            if d == NONE {
                break;
            }
            b = d as usize;
            j -= 1;
        }
        if j == i {
            return f == b;
        }
        if j == i + 1 {
            self.assign(f, w[i].code(), b, queue);
        }
        true
    }

    fn propagate(&mut self, mut queue: Vec<(usize, usize)>) -> bool {
        while let Some((c, x)) = queue.pop() {
            let d = self.get(c, x) as usize;
            for (start, letter) in [(c, x), (d, x ^ 1)] {
                for k in 0..self.conjugates[letter].len() {
                    let w = std::mem::take(&mut self.conjugates[letter][k]);
                    let ok = self.scan(start, &w, &mut queue);
                    self.conjugates[letter][k] = w;
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `false` when some other base coset gives a standardized table that is
    /// already lexicographically smaller on the defined prefix.
    fn minimal_in_class(&self) -> bool {
        let k = self.cosets;
        let cols = self.cols;
        let mut map = vec![NONE; k];
        let mut order: Vec<usize> = Vec::with_capacity(k);
        'bases: for base in 1..k {
            map.iter_mut().for_each(|m| *m = NONE);
            order.clear();
            map[base] = 0;
            order.push(base);
            for row in 0..k {
                if row >= order.len() {
                    continue 'bases;
                }
                let old = order[row];
                for x in 0..cols {
                    let orig = self.get(row, x);
                    let t = self.get(old, x);
                    if orig == NONE || t == NONE {
                        continue 'bases;
                    }
                    let t = t as usize;
                    let renamed = if map[t] == NONE {
                        map[t] = order.len() as u32;
                        order.push(t);
                        map[t]
                    } else {
                        map[t]
                    };
                    if renamed < orig {
                        return false;
                    }
                    if renamed > orig {
                        continue 'bases;
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, start: usize) {
        let total = self.cosets * self.cols;
        let mut pos = start;
        while pos < total && self.table[pos] != NONE {
            pos += 1;
        }
        if pos == total {
            if self.minimal_in_class() {
                self.found.push(CosetTable {
                    index: self.cosets,
                    generators: self.cols / 2,
                    action: self.table[..total].to_vec(),
                });
            }
            return;
        }
        let (c, x) = (pos / self.cols, pos % self.cols);
        let limit = if self.cosets < self.max_index { self.cosets + 1 } else { self.cosets };
        for d in 0..limit {
            let fresh = d == self.cosets;
            if !fresh && self.get(d, x ^ 1) != NONE {
                continue;
            }
            let mark = self.trail.len();
            if fresh {
                self.cosets += 1;
            }
            let mut queue = Vec::new();
            self.assign(c, x, d, &mut queue);
            if self.propagate(queue) && self.minimal_in_class() {
                self.search(pos + 1);
            }
            self.undo(mark);
            if fresh {
                self.cosets -= 1;
            }
        }
    }
}

/// One canonical coset table per conjugacy class of subgroups of index at
/// most `max_index`. The representative is the table whose breadth-first
/// standardization is lexicographically least among all choices of base
/// coset. Output is ordered by index, then by table.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Vec<CosetTable> {
    let max_index = max_index.max(1);
    if p.generator_count() == 0 {
        return vec![CosetTable::trivial(0)];
    }
    let mut search = LowIndex::new(p, max_index);
    // Relators that force entries at coset 0 before any choice is made.
    let mut queue = Vec::new();
    let mut ok = true;
    for x in 0..search.cols {
        for k in 0..search.conjugates[x].len() {
            let w = search.conjugates[x][k].clone();
            ok &= search.scan(0, &w, &mut queue);
        }
    }
    if ok && search.propagate(queue) {
        search.search(0);
    }
    let mut found = search.found;
    found.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.action.cmp(&b.action)));
    found
}
