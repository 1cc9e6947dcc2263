use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use plength::abelian::{abelianize, smith_normal_form, torsion_lower_bound};
use plength::estimator::{family_sweep, stable_upper_bound, EstimatorError, Grid};
use plength::format::decimal;
use plength::lattice::{
    contraction_sweep, default_delta, default_epsilon, fundamental_domain_contraction, lll_reduce, parse_columns,
    parse_rational, reduced_basis_certificate, CellLayout, LatticeBasis, LatticeError, WeightedOneNorm,
};
use plength::rewrite::rewrite_presentation;
use plength::tietze::{simplify, SimplifyBudget};
use plength::{low_index_subgroups, CosetTable, Presentation};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Table(#[from] plength::cosets::TableError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Triangle-cost of group presentations and upper bounds on stable
/// presentation length.
#[derive(Debug, Parser)]
#[command(name = "plength", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest subgroup index to enumerate.
    #[arg(long, global = true, default_value_t = 3)]
    max_index: usize,

    /// Simplification budget as PASSES:MAXLEN.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<SimplifyBudget>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// A presentation: inline text such as "< a, b | a b a^-1 b^-1 >", a path to
/// a file holding one, or "-" for standard input.
type Source = String;

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the triangle-cost of a presentation.
    Tcost { presentation: Source },
    /// Replace every relator by triangles; auxiliary generators go to stderr.
    Triangulate { presentation: Source },
    /// Tietze-simplify without increasing cost.
    Simplify { presentation: Source },
    /// Coset tables of all subgroups up to --max-index, one per conjugacy class.
    Subgroups { presentation: Source },
    /// Reidemeister-Schreier presentation of the subgroup given by a table.
    Rewrite {
        presentation: Source,
        /// Coset table as JSON, or a path to a file holding it.
        #[arg(long)]
        table: String,
        /// Simplify the result.
        #[arg(long)]
        simplify: bool,
    },
    /// Upper bound on stable length from subgroups up to --max-index.
    Stable { presentation: Source },
    /// Sweep a covering family over a parameter grid.
    Family {
        /// surface, seifert, punctured, figure8, whitehead, magic or d2link.
        name: String,
        /// Parameter grid, e.g. "g=2;d=1..100".
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// LLL-reduce a basis and check the reduced-basis certificate.
    Lll {
        /// Columns separated by ';', entries by ',', e.g. "3,-1;1,4".
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
        #[arg(long)]
        delta: Option<String>,
        /// Norm weights, comma separated; all 1 by default.
        #[arg(long)]
        weights: Option<String>,
        /// Certificate constant; the documented default otherwise.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Count triangles contracted in a fundamental parallelogram.
    Contract {
        #[arg(long, default_value = "fig8proof")]
        layout: String,
        /// Sublattice basis, e.g. "3,-1;1,4".
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
        /// Also report the dilations k * sub for k = 1..=KMAX.
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Smith normal form of the abelianization and the torsion floor.
    Abelianize {
        presentation: Source,
        /// Vouch that the group has no 2-torsion.
        #[arg(long)]
        no_two_torsion: bool,
    },
}

fn parse_budget(text: &str) -> Result<SimplifyBudget, String> {
    let bad = || format!("expected PASSES:MAXLEN, got {text:?}");
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok(SimplifyBudget {
        max_passes: a.trim().parse().map_err(|_| bad())?,
        max_total_length: b.trim().parse().map_err(|_| bad())?,
    })
}

fn read_source(src: &str) -> Result<String, CliError> {
    if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if src.trim_start().starts_with('<') || src.trim_start().starts_with('{') || src.trim_start().starts_with('[') {
        return Ok(src.to_string());
    }
    fs::read_to_string(src).map_err(|e| CliError::Input(format!("{src}: {e}")))
}

fn load(src: &str) -> Result<Presentation, CliError> {
    let text = read_source(src)?;
    Presentation::parse(text.trim()).map_err(|e| CliError::Input(e.to_string()))
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, CliError> {
    let budget = cli.budget.unwrap_or_default();
    let format = cli.format;
    let out = match cli.command {
        Command::Tcost { presentation } => {
            let p = load(&presentation)?;
            match format {
                Some(Format::Json) => json_string(&json!({ "presentation": p.to_string(), "tcost": p.tcost().value() })),
                _ => format!("{}\n", p.tcost()),
            }
        }
        Command::Triangulate { presentation } => {
            let p = load(&presentation)?;
            let t = p.triangulate();
            let aux: Vec<_> = t
                .auxiliary
                .iter()
                .map(|a| (t.presentation.generator_names()[a.generator].clone(), p.word_to_string(&a.expression)))
                .collect();
            match format {
                Some(Format::Json) => json_string(&json!({
                    "presentation": t.presentation.to_string(),
                    "tcost": t.presentation.tcost().value(),
                    "auxiliary": aux.iter().map(|(n, e)| json!({ "generator": n, "expression": e })).collect::<Vec<_>>(),
                })),
                _ => {
                    for (n, e) in &aux {
                        eprintln!("{n} = {e}");
                    }
                    format!("{}\n", t.presentation)
                }
            }
        }
        Command::Simplify { presentation } => {
            let p = load(&presentation)?;
            let s = simplify(&p, budget);
            if s.budget_exhausted {
                eprintln!("warning: simplification budget exhausted after {} passes", s.passes);
            }
            match format {
                Some(Format::Json) => json_string(&json!({
                    "presentation": s.presentation.to_string(),
                    "tcost_before": p.tcost().value(),
                    "tcost": s.presentation.tcost().value(),
                    "passes": s.passes,
                    "budget_exhausted": s.budget_exhausted,
                })),
                _ => format!("{}\n", s.presentation),
            }
        }
        Command::Subgroups { presentation } => {
            let p = load(&presentation)?;
            let tables = low_index_subgroups(&p, cli.max_index);
            eprintln!("{} conjugacy classes of subgroups of index at most {}", tables.len(), cli.max_index);
            match format {
                Some(Format::Csv) => {
                    let rows: Vec<Vec<String>> = tables.iter().map(|t| vec![t.index().to_string(), t.to_json()]).collect();
                    csv_string(&["index".into(), "table".into()], &rows)?
                }
                _ => format!("{}\n", CosetTable::list_to_json(&tables)),
            }
        }
        Command::Rewrite { presentation, table, simplify: simp } => {
            let p = load(&presentation)?;
            let t = CosetTable::from_json(&read_source(&table)?)?;
            let rw = rewrite_presentation(&p, &t)?;
            let result = if simp { simplify(&rw.presentation, budget).presentation } else { rw.presentation.clone() };
            match format {
                Some(Format::Json) => json_string(&json!({
                    "index": t.index(),
                    "presentation": result.to_string(),
                    "tcost": result.tcost().value(),
                    "schreier_generators": rw.schreier_words.iter().zip(rw.presentation.generator_names())
                        .map(|(w, n)| json!({ "generator": n, "word": p.word_to_string(w) }))
                        .collect::<Vec<_>>(),
                })),
                _ => format!("{result}\n"),
            }
        }
        Command::Stable { presentation } => {
            let p = load(&presentation)?;
            let est = stable_upper_bound(&p, cli.max_index, budget);
            for (i, why) in &est.failures {
                eprintln!("warning: subgroup {i} skipped: {why}");
            }
            let best = &est.best;
            eprintln!(
                "upper bound on stable length: {} = {} (index {}, searched to index {})",
                best.ratio,
                decimal(&best.ratio, 6),
                best.index,
                cli.max_index
            );
            let ratio = |r: &plength::estimator::EstimateRecord| format!("{}/{}", r.simplified_cost, r.index);
            match format {
                Some(Format::Json) => json_string(&json!({
                    "kind": "upper_bound",
                    "max_index": cli.max_index,
                    "best": { "index": best.index, "ratio": best.ratio.to_string(), "ratio_decimal": decimal(&best.ratio, 6), "table": best.subgroup.to_json() },
                    "records": est.all.iter().map(|r| json!({
                        "index": r.index,
                        "raw_cost": r.raw_cost,
                        "simplified_cost": r.simplified_cost,
                        "ratio": ratio(r),
                        "ratio_decimal": decimal(&r.ratio, 6),
                        "budget_exhausted": r.budget_exhausted,
                        "table": r.subgroup.to_json(),
                    })).collect::<Vec<_>>(),
                    "failures": est.failures.iter().map(|(i, w)| json!({ "subgroup": i, "reason": w })).collect::<Vec<_>>(),
                })),
                _ => {
                    let header: Vec<String> = ["index", "raw_cost", "simplified_cost", "ratio", "ratio_decimal", "budget_exhausted", "table"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect();
                    let rows: Vec<Vec<String>> = est
                        .all
                        .iter()
                        .map(|r| {
                            vec![
                                r.index.to_string(),
                                r.raw_cost.to_string(),
                                r.simplified_cost.to_string(),
                                ratio(r),
                                decimal(&r.ratio, 6),
                                r.budget_exhausted.to_string(),
                                r.subgroup.to_json(),
                            ]
                        })
                        .collect();
                    csv_string(&header, &rows)?
                }
            }
        }
        Command::Family { name, grid, m, n, g, d, e, b } => {
            let mut spec = match grid {
                Some(text) => Grid::parse(&text)?,
                None => Grid::default(),
            };
            for (key, value) in [("m", m), ("n", n), ("g", g), ("d", d), ("e", e), ("b", b)] {
                if let Some(v) = value {
                    spec.set(key, &v)?;
                }
            }
            let sweep = family_sweep(&name, &spec)?;
            if let Some(best) = sweep.argmin() {
                let at: Vec<String> = sweep.param_names.iter().zip(&best.params).map(|(k, v)| format!("{k}={v}")).collect();
                eprintln!(
                    "min ratio {}/{} = {} at {}; adjusted {}",
                    best.tcost,
                    best.degree,
                    decimal(&best.ratio, 6),
                    at.join(","),
                    decimal(&best.adjusted_ratio, 6)
                );
            }
            match format {
                Some(Format::Json) => json_string(&json!({
                    "family": sweep.family,
                    "kind": "upper_bound",
                    "rows": sweep.rows.iter().map(|r| {
                        let mut o = serde_json::Map::new();
                        for (k, v) in sweep.param_names.iter().zip(&r.params) {
                            o.insert(k.clone(), json!(v));
                        }
                        o.insert("degree".into(), json!(r.degree));
                        o.insert("tcost".into(), json!(r.tcost));
                        o.insert("ratio".into(), json!(format!("{}/{}", r.tcost, r.degree)));
                        o.insert("ratio_decimal".into(), json!(decimal(&r.ratio, 6)));
                        o.insert("adjusted_decimal".into(), json!(decimal(&r.adjusted_ratio, 6)));
                        serde_json::Value::Object(o)
                    }).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut header = sweep.param_names.clone();
                    header.extend(["degree", "tcost", "ratio", "ratio_decimal", "adjusted_decimal"].map(String::from));
                    let rows: Vec<Vec<String>> = sweep
                        .rows
                        .iter()
                        .map(|r| {
                            let mut row: Vec<String> = r.params.iter().map(|v| v.to_string()).collect();
                            row.extend([
                                r.degree.to_string(),
                                r.tcost.to_string(),
                                format!("{}/{}", r.tcost, r.degree),
                                decimal(&r.ratio, 6),
                                decimal(&r.adjusted_ratio, 6),
                            ]);
                            row
                        })
                        .collect();
                    csv_string(&header, &rows)?
                }
            }
        }
        Command::Lll { basis, delta, weights, epsilon } => {
            let cols = parse_columns(&basis).ok_or_else(|| CliError::Input(format!("bad basis {basis:?}")))?;
            let b = LatticeBasis::new(cols)?;
            let rational = |s: &str| parse_rational(s.trim()).ok_or_else(|| CliError::Input(format!("bad number {s:?}")));
            let delta = match delta {
                Some(s) => rational(&s)?,
                None => default_delta(),
            };
            let norm = match weights {
                Some(s) => WeightedOneNorm::new(s.split(',').map(rational).collect::<Result<_, _>>()?)?,
                None => WeightedOneNorm::unit(b.rank()),
            };
            let eps = match epsilon {
                Some(s) => rational(&s)?,
                None => default_epsilon(&norm, &delta),
            };
            let red = lll_reduce(&b, &delta)?;
            let cert = reduced_basis_certificate(&red.basis, &norm, &eps);
            let cols_text = |cols: &[Vec<num_rational::BigRational>]| {
                cols.iter()
                    .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let transform = red
                .transform
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(";");
            match format {
                Some(Format::Json) => json_string(&json!({
                    "reduced": cols_text(red.basis.columns()),
                    "transform_rows": transform,
                    "covolume": red.basis.covolume().to_string(),
                    "epsilon": eps.to_string(),
                    "certificate": match &cert {
                        Ok(c) => json!({ "passed": true, "product_of_norms": c.product_of_norms.to_string(), "witness": c.epsilon_witness.to_string() }),
                        Err(e) => json!({ "passed": false, "reason": e.to_string() }),
                    },
                })),
                _ => {
                    let mut s = format!(
                        "reduced={}\ntransform_rows={}\ncovolume={}\nepsilon={}\n",
                        cols_text(red.basis.columns()),
                        transform,
                        red.basis.covolume(),
                        eps
                    );
                    match &cert {
                        Ok(c) => s.push_str(&format!("certificate=pass witness={}\n", c.epsilon_witness)),
                        Err(e) => s.push_str(&format!("certificate=fail {e}\n")),
                    }
                    s
                }
            }
        }
        Command::Contract { layout, sub, kmax } => {
            let layout_v = CellLayout::by_name(&layout).ok_or_else(|| CliError::Input(format!("unknown layout {layout:?}")))?;
            let cols = parse_columns(&sub).ok_or_else(|| CliError::Input(format!("bad sublattice {sub:?}")))?;
            let basis = LatticeBasis::new(cols)?;
            match kmax {
                None => {
                    let c = fundamental_domain_contraction(&layout_v, &basis)?;
                    match format {
                        Some(Format::Json) => json_string(&json!({
                            "total": c.total_triangles,
                            "interior": c.interior_contracted,
                            "remaining": c.boundary_remaining,
                        })),
                        _ => format!("total={} interior={} remaining={}\n", c.total_triangles, c.interior_contracted, c.boundary_remaining),
                    }
                }
                Some(k) => {
                    let rows: Vec<Vec<String>> = contraction_sweep(&layout_v, &basis, k)?
                        .iter()
                        .map(|r| {
                            vec![
                                r.k.to_string(),
                                r.counts.total_triangles.to_string(),
                                r.counts.interior_contracted.to_string(),
                                r.counts.boundary_remaining.to_string(),
                                decimal(&r.boundary_ratio, 6),
                            ]
                        })
                        .collect();
                    let header = ["k", "total", "interior", "remaining", "remaining_ratio"].map(String::from);
                    csv_string(&header, &rows)?
                }
            }
        }
        Command::Abelianize { presentation, no_two_torsion } => {
            let p = load(&presentation)?;
            let snf = smith_normal_form(&abelianize(&p));
            let bound = torsion_lower_bound(&p, no_two_torsion);
            let cost = p.tcost().value();
            match format {
                Some(Format::Json) => json_string(&json!({
                    "group": snf.to_string(),
                    "betti": snf.betti,
                    "invariant_factors": snf.diagonal.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "torsion_order": snf.torsion_order.to_string(),
                    "ceil_log3_torsion": bound.ceil_log3,
                    "tcost": cost,
                    "floor_holds": bound.holds_for(cost),
                    "caveat": bound.caveat,
                })),
                _ => {
                    let mut s = format!(
                        "{}\ntorsion_order={} ceil_log3={} tcost={} floor_holds={}\n",
                        snf,
                        snf.torsion_order,
                        bound.ceil_log3,
                        cost,
                        bound.holds_for(cost)
                    );
                    if bound.caveat {
                        s.push_str("caveat: the torsion floor is only established for groups without 2-torsion\n");
                    }
                    s
                }
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    let text = match run(cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match out_path {
        Some(path) => fs::write(&path, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
