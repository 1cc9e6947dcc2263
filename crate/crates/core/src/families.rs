//! Parametric presentation families with closed-form costs: surface and
//! circle-bundle groups, and link complements in `T^2 x [0,1]` built as
//! `m x n` grids of cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter {name} = {value} is out of range ({expected})")]
    Range {
        name: &'static str,
        value: i64,
        expected: &'static str,
    },
    #[error("template {template}: no rule defines {symbol}_{i}_{j}")]
    Template {
        template: String,
        symbol: String,
        i: i64,
        j: i64,
    },
    #[error("template {template}: bad relation {text:?}")]
    TemplateSyntax { template: String, text: String },
}

fn check(name: &'static str, value: i64, ok: bool, expected: &'static str) -> Result<(), FamilyError> {
    if ok {
        Ok(())
    } else {
        Err(FamilyError::Range { name, value, expected })
    }
}

/// A generated presentation with its parameters and predicted cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyPoint {
    pub family: String,
    pub params: Vec<(String, i64)>,
    pub presentation: Presentation,
    pub predicted_cost: Option<u64>,
}

impl FamilyPoint {
    /// Whether the measured cost equals the prediction (vacuous without one).
    pub fn cost_matches(&self) -> bool {
        self.predicted_cost.is_none_or(|c| self.presentation.tcost().value() == c)
    }
}

fn commutator(a: usize, b: usize) -> [Letter; 4] {
    [Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)]
}

fn surface_names(g: usize) -> Vec<String> {
    (1..=g).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

fn product_of_commutators(g: usize) -> Vec<Letter> {
    (0..g).flat_map(|i| commutator(2 * i, 2 * i + 1)).collect()
}

/// `< x1, y1, ..., xg, yg | [x1,y1] ... [xg,yg] >`, cost `4g - 2`.
pub fn surface(g: i64) -> Result<FamilyPoint, FamilyError> {
    check("g", g, g >= 1, "g >= 1")?;
    let gu = g as usize;
    let presentation = Presentation::new(surface_names(gu), vec![Word::new(product_of_commutators(gu))]).expect("valid names");
    Ok(FamilyPoint {
        family: "surface".into(),
        params: vec![("g".into(), g)],
        presentation,
        predicted_cost: Some(4 * g as u64 - 2),
    })
}

/// Cost per sheet of the degree-`d` cover of the genus-`g` surface by the
/// genus `d(g-1)+1` surface: `(4(d(g-1)+1) - 2) / d`.
pub fn surface_cover_ratio(g: i64, d: i64) -> Result<BigRational, FamilyError> {
    check("g", g, g >= 2, "g >= 2; the torus covers itself and its stable value is 0")?;
    check("d", d, d >= 1, "d >= 1")?;
    Ok(BigRational::new(BigInt::from(4 * (d * (g - 1) + 1) - 2), BigInt::from(d)))
}

/// Triangles in an ideal triangulation of the genus-`g` surface with `b`
/// punctures: `4g - 4 + 2b`.
pub fn punctured_surface_relative(g: i64, b: i64) -> Result<u64, FamilyError> {
    check("g", g, g >= 0, "g >= 0")?;
    check("b", b, b > 0, "b > 0")?;
    check("b", b, 2 * g - 2 + b > 0, "2g - 2 + b > 0")?;
    Ok((4 * g - 4 + 2 * b) as u64)
}

/// `< x1, y1, ..., xg, yg, z | [x1,y1]...[xg,yg] z^e, [xi,z], [yi,z] >`,
/// cost `8g + |e| - 2`.
pub fn seifert(g: i64, e: i64) -> Result<FamilyPoint, FamilyError> {
    check("g", g, g >= 1, "g >= 1")?;
    let gu = g as usize;
    let mut names = surface_names(gu);
    names.push("z".into());
    let z = 2 * gu;
    let mut first = product_of_commutators(gu);
    first.extend(std::iter::repeat_n(Letter::new(z, e < 0), e.unsigned_abs() as usize));
    let mut relators = vec![Word::new(first)];
    for gen in 0..2 * gu {
        relators.push(Word::new(commutator(gen, z).to_vec()));
    }
    let presentation = Presentation::new(names, relators).expect("valid names");
    Ok(FamilyPoint {
        family: "seifert".into(),
        params: vec![("g".into(), g), ("e".into(), e)],
        presentation,
        predicted_cost: Some((8 * g + e.abs() - 2) as u64),
    })
}

/// Cost per sheet of the `d^2`-sheeted cover of `seifert(g, e)` by
/// `seifert(d(g-1)+1, e)`.
pub fn seifert_cover_ratio(g: i64, e: i64, d: i64) -> Result<BigRational, FamilyError> {
    check("g", g, g >= 1, "g >= 1")?;
    check("d", d, d >= 1, "d >= 1")?;
    Ok(BigRational::new(BigInt::from(8 * (d * (g - 1) + 1) + e.abs() - 2), BigInt::from(d * d)))
}

/// Free product by disjoint union of generators and relators.
pub fn free_product(p1: &Presentation, p2: &Presentation) -> Presentation {
    p1.wedge(p2)
}

// ---------------------------------------------------------------------------
// Torus-cover templates
// ---------------------------------------------------------------------------

/// How the corner symbol at `(m+1, n+1)` is tied back into the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CornerRule {
    /// `F = s F' s^-1` with `F'` the symbol at `(1, n+1)`.
    ViaS,
    /// `F = t F' t^-1` with `F'` the symbol at `(m+1, 1)`.
    ViaT,
}

/// Occurrence of a cell symbol at an offset from the current cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
struct CellRef {
    symbol: usize,
    di: i64,
    dj: i64,
    inverse: bool,
}

/// A link complement in `T^2 x [0,1]` cut into a grid of identical cells.
/// Each cell carries the same symbols and core relations; symbols may refer
/// to neighbouring cells by offsets, written `x(1,0)`. Symbols that fall
/// outside the `m x n` grid ("fringe") are identified with grid symbols by
/// conjugating with the shifts `s` (horizontal) and `t` (vertical).
#[derive(Debug, Clone, Serialize)]
pub struct TorusCoverTemplate {
    pub name: String,
    pub cell_symbols: Vec<String>,
    /// Relations `u = v` in the offset syntax.
    pub core_relations: Vec<String>,
    pub corner_rules: Vec<(String, Vec<CornerRule>)>,
    /// The `(1,1)` instance has this many times the stable length of the
    /// underlying manifold group.
    pub commensurability: u64,
    /// Cost of the core relations of one cell.
    pub core_cost: u64,
    /// The `(1,1)` presentation written out by hand.
    pub base_text: String,
}

type Side = Vec<CellRef>;

fn parse_side(template: &TorusCoverTemplate, text: &str) -> Result<Side, FamilyError> {
    let err = || FamilyError::TemplateSyntax {
        template: template.name.clone(),
        text: text.into(),
    };
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let (body, inverse) = match token.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (token, false),
        };
        let (sym, di, dj) = match body.split_once('(') {
            Some((sym, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(err)?;
                let (a, b) = inner.split_once(',').ok_or_else(err)?;
                (sym, a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?)
            }
            None => (body, 0, 0),
        };
        let symbol = template.cell_symbols.iter().position(|s| s == sym).ok_or_else(err)?;
        out.push(CellRef { symbol, di, dj, inverse });
    }
    Ok(out)
}

/// Fringe position relative to the `m x n` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Site {
    symbol: usize,
    i: i64,
    j: i64,
}

/// A fringe identification `lhs = c rhs c^-1` for a shift `c`.
struct Identification {
    lhs: Site,
    shift: usize,
    rhs: Site,
}

impl TorusCoverTemplate {
    pub fn base_presentation(&self) -> Presentation {
        Presentation::parse(&self.base_text).expect("builtin base presentations parse")
    }

    fn corner_rules_for(&self, symbol: usize) -> &[CornerRule] {
        let name = &self.cell_symbols[symbol];
        self.corner_rules
            .iter()
            .find(|(s, _)| s == name)
            .map_or(&[], |(_, r)| r.as_slice())
    }
}

const SHIFT_S: usize = 0;
const SHIFT_T: usize = 1;

/// The `mn`-sheeted cover: `m` sheets along `s`, `n` along `t`.
///
/// Generators are the cell symbols `x_i_j` (by symbol, then `i`, then `j`),
/// then the fringe symbols in the same order, then `s, t`. Relators are the
/// core relations cell by cell, then one identification per fringe symbol
/// (two at the corner when both rules are declared), then `s t s^-1 t^-1`.
pub fn instantiate_torus_cover(tmpl: &TorusCoverTemplate, m: i64, n: i64) -> Result<FamilyPoint, FamilyError> {
    check("m", m, m >= 1, "m >= 1")?;
    check("n", n, n >= 1, "n >= 1")?;
    let relations: Vec<(Side, Side)> = tmpl
        .core_relations
        .iter()
        .map(|text| {
            let (l, r) = text.split_once('=').ok_or_else(|| FamilyError::TemplateSyntax {
                template: tmpl.name.clone(),
                text: text.clone(),
            })?;
            Ok((parse_side(tmpl, l)?, parse_side(tmpl, r)?))
        })
        .collect::<Result<_, FamilyError>>()?;
    let in_grid = |s: &Site| (1..=m).contains(&s.i) && (1..=n).contains(&s.j);

    // Fringe closure.
    let mut pending: Vec<Site> = Vec::new();
    let mut fringe: BTreeSet<Site> = BTreeSet::new();
    let want = |s: Site, pending: &mut Vec<Site>, fringe: &mut BTreeSet<Site>| {
        if !in_grid(&s) && fringe.insert(s) {
            pending.push(s);
        }
    };
    for (l, r) in &relations {
        for c in l.iter().chain(r) {
            for i in 1..=m {
                for j in 1..=n {
                    want(Site { symbol: c.symbol, i: i + c.di, j: j + c.dj }, &mut pending, &mut fringe);
                }
            }
        }
    }
    let mut rules: BTreeMap<Site, Vec<Identification>> = BTreeMap::new();
    while let Some(f) = pending.pop() {
        let site = |i, j| Site { symbol: f.symbol, i, j };
        let mut ids = Vec::new();
        if f.i == m + 1 && f.j == n + 1 {
            for rule in tmpl.corner_rules_for(f.symbol) {
                ids.push(match rule {
                    CornerRule::ViaS => Identification { lhs: f, shift: SHIFT_S, rhs: site(1, n + 1) },
                    CornerRule::ViaT => Identification { lhs: f, shift: SHIFT_T, rhs: site(m + 1, 1) },
                });
            }
        } else if f.i == m + 1 && (1..=n).contains(&f.j) {
            ids.push(Identification { lhs: f, shift: SHIFT_S, rhs: site(1, f.j) });
        } else if f.j == n + 1 && (1..=m).contains(&f.i) {
            ids.push(Identification { lhs: f, shift: SHIFT_T, rhs: site(f.i, 1) });
        } else if f.j == 0 && (1..=m + 1).contains(&f.i) {
            ids.push(Identification { lhs: site(f.i, n), shift: SHIFT_T, rhs: f });
        } else if f.i == 0 && (1..=n).contains(&f.j) {
            ids.push(Identification { lhs: site(m, f.j), shift: SHIFT_S, rhs: f });
        }
        if ids.is_empty() {
            return Err(FamilyError::Template {
                template: tmpl.name.clone(),
                symbol: tmpl.cell_symbols[f.symbol].clone(),
                i: f.i,
                j: f.j,
            });
        }
        for id in &ids {
            want(id.lhs, &mut pending, &mut fringe);
            want(id.rhs, &mut pending, &mut fringe);
        }
        rules.insert(f, ids);
    }

    // Generator numbering.
    let k = tmpl.cell_symbols.len();
    let (mu, nu) = (m as usize, n as usize);
    let cell_index = |s: &Site| s.symbol * mu * nu + (s.i as usize - 1) * nu + (s.j as usize - 1);
    let mut names: Vec<String> = Vec::with_capacity(k * mu * nu + fringe.len() + 2);
    for sym in &tmpl.cell_symbols {
        for i in 1..=m {
            for j in 1..=n {
                names.push(format!("{sym}_{i}_{j}"));
            }
        }
    }
    let mut fringe_index: HashMap<Site, usize> = HashMap::new();
    for f in &fringe {
        fringe_index.insert(*f, names.len());
        names.push(format!("{}_{}_{}", tmpl.cell_symbols[f.symbol], f.i, f.j));
    }
    let s_gen = names.len();
    names.push("s".into());
    names.push("t".into());
    let index_of = |s: &Site| if in_grid(s) { cell_index(s) } else { fringe_index[s] };
    let shift_gen = |shift: usize| s_gen + shift;

    let mut relators = Vec::with_capacity(relations.len() * mu * nu + fringe.len() + 2);
    let side_word = |side: &Side, i: i64, j: i64| -> Vec<Letter> {
        side.iter()
            .map(|c| Letter::new(index_of(&Site { symbol: c.symbol, i: i + c.di, j: j + c.dj }), c.inverse))
            .collect()
    };
    for i in 1..=m {
        for j in 1..=n {
            for (l, r) in &relations {
                let lhs = Word::new(side_word(l, i, j));
                let rhs = Word::new(side_word(r, i, j));
                relators.push(lhs.concat(&rhs.inverse()).cyclic_reduce());
            }
        }
    }
    for ids in rules.values() {
        for id in ids {
            let c = shift_gen(id.shift);
            relators.push(Word::new(vec![
                Letter::pos(index_of(&id.lhs)),
                Letter::pos(c),
                Letter::neg(index_of(&id.rhs)),
                Letter::neg(c),
            ]));
        }
    }
    relators.push(Word::new(commutator(shift_gen(SHIFT_S), shift_gen(SHIFT_T)).to_vec()));

    let presentation = Presentation::new(names, relators).expect("generated names are distinct");
    let predicted_cost = match tmpl.name.as_str() {
        "figure8" => Some((6 * m * n + 4 * m + 4 * n + 6) as u64),
        _ => None,
    };
    Ok(FamilyPoint {
        family: tmpl.name.clone(),
        params: vec![("m".into(), m), ("n".into(), n)],
        presentation,
        predicted_cost,
    })
}

/// Figure-eight (cover of degree 6 of the knot complement's commensurability
/// class), Whitehead (factor 2), magic manifold and the `d = 2` link.
pub fn builtin_templates() -> Vec<TorusCoverTemplate> {
    let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        TorusCoverTemplate {
            name: "figure8".into(),
            cell_symbols: strings(&["x", "y", "z", "w", "a", "b"]),
            core_relations: strings(&[
                "a = y x",
                "a = z y",
                "a = w z",
                "b = z(0,1) w",
                "b = w x(1,1)",
                "b = x(1,1) y(1,0)",
            ]),
            corner_rules: vec![("x".into(), vec![CornerRule::ViaS, CornerRule::ViaT])],
            commensurability: 6,
            core_cost: 6,
            base_text: "< x_1_1, y_1_1, z_1_1, w_1_1, a_1_1, b_1_1, x_1_2, x_2_1, x_2_2, y_2_1, z_1_2, s, t |
                a_1_1 = y_1_1 x_1_1, a_1_1 = z_1_1 y_1_1, a_1_1 = w_1_1 z_1_1,
                b_1_1 = z_1_2 w_1_1, b_1_1 = w_1_1 x_2_2, b_1_1 = x_2_2 y_2_1,
                x_1_2 = t x_1_1 t^-1, x_2_1 = s x_1_1 s^-1,
                x_2_2 = s x_1_2 s^-1, x_2_2 = t x_2_1 t^-1,
                y_2_1 = s y_1_1 s^-1, z_1_2 = t z_1_1 t^-1,
                s t = t s >"
                .into(),
        },
        TorusCoverTemplate {
            name: "whitehead".into(),
            cell_symbols: strings(&["x", "y", "a", "b"]),
            core_relations: strings(&["a = y x", "a = x(1,1) y", "b = y(0,1) x(1,1)", "b = x(1,1) y(1,0)"]),
            corner_rules: vec![("x".into(), vec![CornerRule::ViaT])],
            commensurability: 2,
            core_cost: 4,
            base_text: "< x_1_1, y_1_1, a_1_1, b_1_1, x_2_1, x_2_2, y_1_2, y_2_1, s, t |
                a_1_1 = y_1_1 x_1_1, a_1_1 = x_2_2 y_1_1,
                b_1_1 = y_1_2 x_2_2, b_1_1 = x_2_2 y_2_1,
                x_2_1 = s x_1_1 s^-1, x_2_2 = t x_2_1 t^-1,
                y_1_2 = t y_1_1 t^-1, y_2_1 = s y_1_1 s^-1,
                s t = t s >"
                .into(),
        },
        TorusCoverTemplate {
            name: "magic".into(),
            cell_symbols: strings(&["x", "y", "a"]),
            core_relations: strings(&["a = y(0,1) x", "a = x x(1,0)", "a = x(1,0) y"]),
            corner_rules: vec![],
            commensurability: 1,
            core_cost: 3,
            base_text: "< x_1_1, y_1_1, a_1_1, x_2_1, y_1_2, s, t |
                a_1_1 = y_1_2 x_1_1, a_1_1 = x_1_1 x_2_1, a_1_1 = x_2_1 y_1_1,
                x_2_1 = s x_1_1 s^-1, y_1_2 = t y_1_1 t^-1,
                s t = t s >"
                .into(),
        },
        TorusCoverTemplate {
            name: "d2link".into(),
            cell_symbols: strings(&["x", "y", "z", "w", "u", "a", "b", "c"]),
            core_relations: strings(&[
                "a = y x",
                "a = w y",
                "a = u w",
                "b = y(1,-1) z",
                "c = z(0,1) u",
                "c = a x(1,0)",
                "c = x(1,0) b",
            ]),
            corner_rules: vec![],
            commensurability: 1,
            core_cost: 7,
            base_text: "< x_1_1, y_1_1, z_1_1, w_1_1, u_1_1, a_1_1, b_1_1, c_1_1, x_2_1, y_2_0, y_2_1, z_1_2, s, t |
                a_1_1 = y_1_1 x_1_1, a_1_1 = w_1_1 y_1_1, a_1_1 = u_1_1 w_1_1,
                b_1_1 = y_2_0 z_1_1, c_1_1 = z_1_2 u_1_1,
                c_1_1 = a_1_1 x_2_1, c_1_1 = x_2_1 b_1_1,
                x_2_1 = s x_1_1 s^-1, y_2_1 = t y_2_0 t^-1,
                y_2_1 = s y_1_1 s^-1, z_1_2 = t z_1_1 t^-1,
                s t = t s >"
                .into(),
        },
    ]
}

pub fn builtin_template(name: &str) -> Option<TorusCoverTemplate> {
    builtin_templates().into_iter().find(|t| t.name == name)
}
