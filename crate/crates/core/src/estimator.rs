//! Upper bounds on stable presentation length: search finite-index
//! subgroups, rewrite, simplify and keep the least cost per sheet. Also the
//! closed-form family sweeps.
//!
//! Every number produced here is an upper bound. A finite search never
//! certifies the infimum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cosets::{low_index_subgroups, CosetTable, TableError};
use crate::families::{self, FamilyError};
use crate::presentation::Presentation;
use crate::rewrite::rewrite_presentation;
use crate::tietze::{simplify, SimplifyBudget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} takes parameters {expected}, got {got:?}")]
    UnknownParameter {
        family: String,
        expected: String,
        got: String,
    },
    #[error("bad grid {0:?}; expected e.g. \"g=2;d=1..100\"")]
    BadGrid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimateRecord {
    pub subgroup: CosetTable,
    pub index: usize,
    /// Cost of the rewritten presentation before simplification.
    pub raw_cost: u64,
    pub simplified_cost: u64,
    /// `simplified_cost / index`.
    pub ratio: BigRational,
    /// Simplification stopped on its budget.
    pub budget_exhausted: bool,
}

/// Rewrites `p` along `t`, simplifies, and records the cost per sheet.
pub fn estimate_for_table(p: &Presentation, t: &CosetTable, budget: SimplifyBudget) -> Result<EstimateRecord, TableError> {
    let rw = rewrite_presentation(p, t)?;
    let raw_cost = rw.presentation.tcost().value();
    let s = simplify(&rw.presentation, budget);
    let simplified_cost = s.presentation.tcost().value().min(raw_cost);
    Ok(EstimateRecord {
        subgroup: t.clone(),
        index: t.index(),
        raw_cost,
        simplified_cost,
        ratio: BigRational::new(BigInt::from(simplified_cost), BigInt::from(t.index())),
        budget_exhausted: s.budget_exhausted,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StableEstimate {
    pub best: EstimateRecord,
    /// One record per conjugacy class of subgroups, by index then table.
    pub all: Vec<EstimateRecord>,
    /// Subgroups that could not be processed, with the reason.
    pub failures: Vec<(usize, String)>,
}

/// Least `T(H) / [G:H]` over conjugacy classes of subgroups of index at most
/// `max_index`. The index-1 subgroup is always included, so the bound never
/// exceeds the simplified cost of `p` itself.
pub fn stable_upper_bound(p: &Presentation, max_index: usize, budget: SimplifyBudget) -> StableEstimate {
    let tables = low_index_subgroups(p, max_index);
    let results: Vec<Result<EstimateRecord, TableError>> =
        tables.par_iter().map(|t| estimate_for_table(p, t, budget)).collect();
    let mut all = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => all.push(rec),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let best = all
        .iter()
        .min_by(|a, b| a.ratio.cmp(&b.ratio).then(a.index.cmp(&b.index)))
        .cloned()
        .expect("the whole group is always enumerated");
    StableEstimate { best, all, failures }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicativityReport {
    pub index: usize,
    /// Bound for `G` searched to index `index * max_index2`.
    pub bound_g: BigRational,
    /// Bound for the subgroup searched to index `max_index2`.
    pub bound_h: BigRational,
    /// `bound_h <= index * bound_g`.
    pub subgroup_side_holds: bool,
    /// `index * bound_g <= bound_h`, which holds whenever simplification
    /// treats a subgroup of `H` the same way from either presentation.
    pub ambient_side_holds: bool,
}

/// Compares stable upper bounds of `G` and of the subgroup encoded by `t`
/// against `T_inf(H) = [G:H] T_inf(G)`.
pub fn multiplicativity_check(
    p: &Presentation,
    t: &CosetTable,
    max_index2: usize,
    budget: SimplifyBudget,
) -> Result<MultiplicativityReport, TableError> {
    let d = t.index();
    let h = rewrite_presentation(p, t)?.presentation;
    let bound_g = stable_upper_bound(p, d * max_index2, budget).best.ratio;
    let bound_h = stable_upper_bound(&h, max_index2, budget).best.ratio;
    let scaled = &bound_g * BigRational::from_integer(BigInt::from(d));
    Ok(MultiplicativityReport {
        index: d,
        subgroup_side_holds: bound_h <= scaled,
        ambient_side_holds: scaled <= bound_h,
        bound_g,
        bound_h,
    })
}

/// Bound for a free product from bounds for its factors, by gluing `d2`
/// copies of one cover to `d1` copies of the other.
pub fn free_product_combine(e1: &EstimateRecord, e2: &EstimateRecord) -> BigRational {
    &e1.ratio + &e2.ratio
}

// ---------------------------------------------------------------------------
// Family sweeps
// ---------------------------------------------------------------------------

/// Parameter name to the list of values to sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid(pub BTreeMap<String, Vec<i64>>);

impl Grid {
    /// Parses `name=spec` pairs separated by `;`, where `spec` is a comma
    /// list of integers or inclusive ranges `a..b`.
    pub fn parse(text: &str) -> Result<Self, EstimatorError> {
        let mut grid = Grid::default();
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, spec) = part.split_once('=').ok_or_else(|| EstimatorError::BadGrid(text.into()))?;
            let values = parse_values(spec).ok_or_else(|| EstimatorError::BadGrid(text.into()))?;
            grid.0.insert(name.trim().to_string(), values);
        }
        Ok(grid)
    }

    pub fn set(&mut self, name: &str, spec: &str) -> Result<(), EstimatorError> {
        let values = parse_values(spec).ok_or_else(|| EstimatorError::BadGrid(spec.into()))?;
        self.0.insert(name.to_string(), values);
        Ok(())
    }
}

fn parse_values(spec: &str) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                if a > b {
                    return None;
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().ok()?),
        }
    }
    (!out.is_empty()).then_some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub params: Vec<i64>,
    /// Index of the cover (1 for relative counts).
    pub degree: u64,
    pub tcost: u64,
    /// `tcost / degree`.
    pub ratio: BigRational,
    /// `ratio` divided by the family's commensurability factor.
    pub adjusted_ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySweep {
    pub family: String,
    pub param_names: Vec<String>,
    pub rows: Vec<FamilyRow>,
}

impl FamilySweep {
    /// Row with the least ratio (first one on ties).
    pub fn argmin(&self) -> Option<&FamilyRow> {
        self.rows.iter().fold(None, |best: Option<&FamilyRow>, r| match best {
            Some(b) if b.ratio <= r.ratio => Some(b),
            _ => Some(r),
        })
    }
}

pub const FAMILIES: &[&str] = &["surface", "seifert", "punctured", "figure8", "whitehead", "magic", "d2link"];

fn family_params(family: &str) -> Option<(&'static [&'static str], &'static [i64])> {
    Some(match family {
        "surface" => (&["g", "d"], &[2, 1]),
        "seifert" => (&["g", "e", "d"], &[1, 1, 1]),
        "punctured" => (&["g", "b"], &[1, 1]),
        "figure8" | "whitehead" | "magic" | "d2link" => (&["m", "n"], &[1, 1]),
        _ => return None,
    })
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn family_row(family: &str, v: &[i64]) -> Result<FamilyRow, EstimatorError> {
    let row = |degree: u64, tcost: u64, factor: u64| FamilyRow {
        params: v.to_vec(),
        degree,
        tcost,
        ratio: ratio(tcost, degree),
        adjusted_ratio: ratio(tcost, degree * factor),
    };
    Ok(match family {
        "surface" => {
            let (g, d) = (v[0], v[1]);
            let expected = families::surface_cover_ratio(g, d)?;
            let cover = families::surface(d * (g - 1) + 1)?;
            let r = row(d as u64, cover.presentation.tcost().value(), 1);
            debug_assert_eq!(r.ratio, expected);
            r
        }
        "seifert" => {
            let (g, e, d) = (v[0], v[1], v[2]);
            let expected = families::seifert_cover_ratio(g, e, d)?;
            let cover = families::seifert(d * (g - 1) + 1, e)?;
            let r = row((d * d) as u64, cover.presentation.tcost().value(), 1);
            debug_assert_eq!(r.ratio, expected);
            r
        }
        "punctured" => row(1, families::punctured_surface_relative(v[0], v[1])?, 1),
        name => {
            let t = families::builtin_template(name).ok_or_else(|| EstimatorError::UnknownFamily(name.into()))?;
            let point = families::instantiate_torus_cover(&t, v[0], v[1])?;
            row((v[0] * v[1]) as u64, point.presentation.tcost().value(), t.commensurability)
        }
    })
}

/// One row per point of the grid (cartesian product in parameter order,
/// last parameter fastest). Missing parameters take the family default.
pub fn family_sweep(family: &str, grid: &Grid) -> Result<FamilySweep, EstimatorError> {
    let (names, defaults) = family_params(family).ok_or_else(|| EstimatorError::UnknownFamily(family.into()))?;
    for key in grid.0.keys() {
        if !names.contains(&key.as_str()) {
            return Err(EstimatorError::UnknownParameter {
                family: family.into(),
                expected: names.join(","),
                got: key.clone(),
            });
        }
    }
    let axes: Vec<Vec<i64>> = names
        .iter()
        .zip(defaults)
        .map(|(n, d)| grid.0.get(*n).cloned().unwrap_or_else(|| vec![*d]))
        .collect();
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let rows = points
        .par_iter()
        .map(|v| family_row(family, v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FamilySweep {
        family: family.into(),
        param_names: names.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// Whether the ratios of consecutive rows never increase.
pub fn is_nonincreasing(rows: &[FamilyRow]) -> bool {
    rows.windows(2).all(|w| w[1].ratio <= w[0].ratio)
}

/// `true` when every ratio is zero: free groups and other cost-zero cases.
pub fn all_zero(records: &[EstimateRecord]) -> bool {
    records.iter().all(|r| r.ratio.is_zero())
}
