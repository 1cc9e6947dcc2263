//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plength::abelian::{abelianize, smith_normal_form, torsion_lower_bound};
use plength::complex::{bfs_tree_edges, contract_tree, cover, from_presentation};
use plength::families::{builtin_template, instantiate_torus_cover, seifert, seifert_cover_ratio, surface, surface_cover_ratio};
use plength::fixtures::{corpus, Fixture};
use plength::format::decimal;
use plength::lattice::{
    default_delta, default_epsilon, fundamental_domain_contraction, is_lll_reduced, lll_reduce, reduced_basis_certificate,
    CellLayout, LatticeBasis, WeightedOneNorm,
};
use plength::rewrite::rewrite_presentation;
use plength::tietze::{simplify, SimplifyBudget};
use plength::{low_index_subgroups, CosetTable, Presentation};

type Check = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Presentations derived from no-2-torsion fixtures, collected for the
/// torsion-floor criterion.
#[derive(Default)]
struct Pool(Vec<(String, Presentation)>);

impl Pool {
    fn add(&mut self, f: &Fixture, what: &str, p: &Presentation) {
        if f.no_two_torsion {
            self.0.push((format!("{}:{}", f.name, what), p.clone()));
        }
    }
}

fn c1() -> Check {
    for g in 1..=10 {
        let p = surface(g).map_err(|e| e.to_string())?.presentation;
        let cost = p.tcost().value();
        ensure(cost == (4 * g - 2) as u64, || format!("g = {g}: tcost {cost}"))?;
        // The group really is the genus-g surface group: abelianization Z^2g.
        let snf = smith_normal_form(&abelianize(&p));
        ensure(snf.betti == 2 * g as usize && snf.torsion_order == BigInt::from(1), || format!("g = {g}: H1 = {snf}"))?;
    }
    Ok("tcost(surface(g)) = 4g-2 for g = 1..10".into())
}

fn c2() -> Check {
    let mut previous: Option<BigRational> = None;
    let mut last = q(0, 1);
    for d in 1..=100 {
        let r = surface_cover_ratio(2, d).map_err(|e| e.to_string())?;
        ensure(r == q(4 * (d + 1) - 2, d), || format!("d = {d}: ratio {r}"))?;
        if let Some(p) = &previous {
            ensure(r < *p, || format!("not strictly decreasing at d = {d}"))?;
        }
        previous = Some(r.clone());
        last = r;
    }
    let shown = decimal(&last, 6);
    ensure(shown == "4.02", || format!("d = 100 shows {shown}"))?;
    let gap = &last - q(4, 1);
    Ok(format!("strictly decreasing, d = 100 gives {shown}, gap to 4 is {}", decimal(&gap, 6)))
}

fn c3() -> Check {
    let tmpl = builtin_template("figure8").ok_or("figure8 template missing")?;
    for m in 1..=10 {
        for n in 1..=10 {
            let p = instantiate_torus_cover(&tmpl, m, n).map_err(|e| e.to_string())?;
            let cost = p.presentation.tcost().value() as i64;
            ensure(cost == 6 * m * n + 4 * m + 4 * n + 6, || format!("(m, n) = ({m}, {n}): tcost {cost}"))?;
        }
    }
    let p = instantiate_torus_cover(&tmpl, 50, 50).map_err(|e| e.to_string())?;
    let ratio = q(p.presentation.tcost().value() as i64, 2500);
    ensure(ratio == q(15406, 2500), || format!("ratio at 50 is {ratio}"))?;
    ensure((&ratio - q(6, 1)).abs() <= q(2, 10), || "ratio not within 0.2 of 6".into())?;
    let adjusted = &ratio / q(tmpl.commensurability as i64, 1);
    ensure(adjusted <= q(103, 100), || format!("adjusted {}", decimal(&adjusted, 6)))?;
    Ok(format!(
        "formula holds on 10x10, ratio at 50 = {}, adjusted = {}",
        decimal(&ratio, 6),
        decimal(&adjusted, 6)
    ))
}

fn c4() -> Check {
    let mut parts = Vec::new();
    for (name, target) in [("whitehead", 4), ("magic", 3), ("d2link", 7)] {
        let tmpl = builtin_template(name).ok_or_else(|| format!("{name} template missing"))?;
        let p = instantiate_torus_cover(&tmpl, 50, 50).map_err(|e| e.to_string())?;
        let ratio = q(p.presentation.tcost().value() as i64, 2500);
        ensure((&ratio - q(target, 1)).abs() <= q(1, 4), || format!("{name}: ratio {}", decimal(&ratio, 6)))?;
        parts.push(format!("{name} {}", decimal(&ratio, 6)));
    }
    Ok(parts.join(", "))
}

fn c5() -> Check {
    for g in 1..=5 {
        for e in -5..=5 {
            let p = seifert(g, e).map_err(|x| x.to_string())?.presentation;
            let cost = p.tcost().value() as i64;
            ensure(cost == 8 * g + e.abs() - 2, || format!("(g, e) = ({g}, {e}): tcost {cost}"))?;
        }
    }
    let mut previous: Option<BigRational> = None;
    let mut last = q(0, 1);
    for d in 1..=30 {
        let r = seifert_cover_ratio(2, 1, d).map_err(|e| e.to_string())?;
        if let Some(p) = &previous {
            ensure(r < *p, || format!("not decreasing at d = {d}"))?;
        }
        previous = Some(r.clone());
        last = r;
    }
    ensure(last < q(3, 10), || format!("d = 30 gives {last}"))?;
    Ok(format!("8g+|e|-2 on g <= 5, |e| <= 5; d = 30 ratio {}", decimal(&last, 6)))
}

fn c6() -> Check {
    let sub = LatticeBasis::from_integer_columns(&[vec![3, -1], vec![1, 4]]).map_err(|e| e.to_string())?;
    let counts = fundamental_domain_contraction(&CellLayout::fig8proof(), &sub).map_err(|e| e.to_string())?;
    let cell = [[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)], [(0, 0), (1, 0), (2, 1)]];
    let oracle = common::interior_triangles(&cell, (3, -1), (1, 4));
    ensure(counts.total_triangles == 39, || format!("total {}", counts.total_triangles))?;
    ensure(counts.interior_contracted == 15, || format!("interior {}", counts.interior_contracted))?;
    ensure(oracle == 15, || format!("oracle counts {oracle}"))?;
    ensure(counts.boundary_remaining == 24, || format!("remaining {}", counts.boundary_remaining))?;
    Ok("total 39, interior 15 (oracle 15), remaining 24".into())
}

struct Triangulated {
    presentation: Presentation,
    expressions: Vec<plength::Word>,
}

fn triangulated(p: &Presentation) -> Triangulated {
    let t = p.triangulate();
    Triangulated {
        expressions: t.auxiliary.iter().map(|a| a.expression.clone()).collect(),
        presentation: t.presentation,
    }
}

fn c7(pool: &mut Pool) -> Check {
    let fixtures = corpus();
    let mut pairs = 0;
    let mut violations = Vec::new();
    for f in &fixtures {
        let tri = triangulated(&f.presentation);
        let base = tri.presentation.tcost().value();
        pool.add(f, "triangulated", &tri.presentation);
        for t in low_index_subgroups(&f.presentation, 4) {
            let t2 = t.extend_with(&tri.expressions);
            let rw = rewrite_presentation(&tri.presentation, &t2).map_err(|e| e.to_string())?;
            let cost = rw.presentation.tcost().value();
            pairs += 1;
            if cost > t.index() as u64 * base {
                violations.push(format!("{} index {}: {cost} > {} x {base}", f.name, t.index(), t.index()));
            }
            pool.add(f, "rewrite", &rw.presentation);
        }
    }
    ensure(fixtures.len() >= 8, || "fewer than 8 fixtures".into())?;
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!("{} fixtures, {pairs} subgroup classes, 0 violations", fixtures.len()))
}

fn c8() -> Check {
    let mut pairs = 0;
    for f in corpus() {
        let tri = triangulated(&f.presentation);
        let base = from_presentation(&tri.presentation).map_err(|e| e.to_string())?;
        for t in low_index_subgroups(&f.presentation, 4) {
            let t2 = t.extend_with(&tri.expressions);
            let d = t.index() as i64;
            let cov = cover(&base, &t2).map_err(|e| e.to_string())?;
            ensure(cov.euler_char() == d * base.euler_char(), || {
                format!("{} index {d}: chi {} vs {}", f.name, cov.euler_char(), d * base.euler_char())
            })?;
            let contracted = contract_tree(&cov, &bfs_tree_edges(&t2)).map_err(|e| e.to_string())?;
            let geometric = contracted.complex.to_presentation().map_err(|e| e.to_string())?.tcost();
            let algebraic = rewrite_presentation(&tri.presentation, &t2).map_err(|e| e.to_string())?.presentation.tcost();
            ensure(geometric == algebraic, || {
                format!("{} index {d}: cover route {geometric} vs rewriting {algebraic}", f.name)
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} fixture x table pairs, chi and tcost agree"))
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let delta = default_delta();
    let mut exact_shortest = 0;
    for rank in [2usize, 3] {
        let norm = WeightedOneNorm::unit(rank);
        let eps = default_epsilon(&norm, &delta);
        for case in 0..100 {
            let cols = common::random_basis(&mut rng, rank, 50);
            let b = LatticeBasis::from_integer_columns(&cols).map_err(|e| e.to_string())?;
            let red = lll_reduce(&b, &delta).map_err(|e| e.to_string())?;
            let ctx = || format!("rank {rank} case {case} basis {cols:?}");
            ensure(red.basis.covolume() == b.covolume(), || format!("{}: covolume changed", ctx()))?;
            ensure(is_lll_reduced(&red.basis, &delta), || format!("{}: not reduced", ctx()))?;
            reduced_basis_certificate(&red.basis, &norm, &eps).map_err(|e| format!("{}: {e}", ctx()))?;
            // Reduced column j is sum_i U[i][j] * original column i.
            for j in 0..rank {
                for k in 0..rank {
                    let mut s = BigRational::zero();
                    for (i, col) in cols.iter().enumerate() {
                        s += BigRational::from_integer(&red.transform[i][j] * BigInt::from(col[k]));
                    }
                    ensure(s == red.basis.columns()[j][k], || format!("{}: transform mismatch", ctx()))?;
                }
            }
            if rank == 2 {
                let ints = red.basis.integer_columns().ok_or("reduced basis not integral")?;
                let b1: Vec<i64> = ints[0].iter().map(|x| x.to_i64().unwrap()).collect();
                let b1_sq = b1[0] * b1[0] + b1[1] * b1[1];
                let lambda = common::shortest_squared_rank2([cols[0][0], cols[0][1]], [cols[1][0], cols[1][1]], b1_sq);
                // LLL with delta = 3/4 guarantees |b1|^2 <= 2 lambda_1^2.
                ensure(lambda <= b1_sq && b1_sq <= 2 * lambda, || format!("{}: |b1|^2 = {b1_sq}, lambda^2 = {lambda}", ctx()))?;
                if lambda == b1_sq {
                    exact_shortest += 1;
                }
            }
        }
    }
    Ok(format!(
        "200 bases, covolume and certificates hold; rank 2 b1 is shortest in {exact_shortest}/100, within factor 2 in all"
    ))
}

fn c10(pool: &Pool) -> Check {
    let mut checked = 0;
    for (name, p) in &pool.0 {
        let bound = torsion_lower_bound(p, true);
        ensure(bound.holds_for(p.tcost().value()), || {
            format!("{name}: tcost {} but torsion order {}", p.tcost(), bound.torsion_order)
        })?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for case in 0..1000 {
        let (rows, cols) = common::random_matrix(&mut rng, 6, 10);
        let snf = smith_normal_form(&plength::abelian::IntegerMatrix::from_rows(&rows, cols));
        let ours: Vec<i128> = snf.diagonal.iter().map(|d| d.to_i128().unwrap()).collect();
        let oracle = common::invariant_factors(&rows, cols);
        ensure(ours == oracle, || format!("matrix {case} {rows:?}: {ours:?} vs {oracle:?}"))?;
    }
    Ok(format!("{checked} generated presentations satisfy the floor; 1000 SNF oracle matches"))
}

fn c11(pool: &mut Pool) -> Check {
    let mut inputs = 0;
    for f in corpus() {
        let mut family = vec![("base".to_string(), f.presentation.clone())];
        family.push(("triangulated".into(), f.presentation.triangulate().presentation));
        for t in low_index_subgroups(&f.presentation, 2).into_iter().filter(|t| t.index() == 2) {
            let rw = rewrite_presentation(&f.presentation, &t).map_err(|e| e.to_string())?;
            family.push((format!("index2 {}", rw.presentation), rw.presentation));
        }
        for (what, p) in family {
            let s = simplify(&p, SimplifyBudget::default()).presentation;
            pool.add(&f, "simplified", &s);
            let ctx = || format!("{} {what}", f.name);
            ensure(s.tcost() <= p.tcost(), || format!("{}: tcost rose {} -> {}", ctx(), p.tcost(), s.tcost()))?;
            let (a, b) = (smith_normal_form(&abelianize(&p)), smith_normal_form(&abelianize(&s)));
            ensure(a.betti == b.betti && a.torsion_factors() == b.torsion_factors(), || {
                format!("{}: H1 {a} became {b}", ctx())
            })?;
            let (na, nb) = (count(&p, 3), count(&s, 3));
            ensure(na == nb, || format!("{}: {na:?} subgroups became {nb:?}", ctx()))?;
            inputs += 1;
        }
    }
    Ok(format!("{inputs} presentations: tcost, H1 and index <= 3 subgroup counts preserved"))
}

fn count(p: &Presentation, k: usize) -> Vec<usize> {
    let tables: Vec<CosetTable> = low_index_subgroups(p, k);
    (1..=k).map(|i| tables.iter().filter(|t| t.index() == i).count()).collect()
}

fn main() -> ExitCode {
    let mut pool = Pool::default();
    let mut results: Vec<(usize, &str, Duration, Duration, Check)> = Vec::new();
    let mut time = |n, title, limit: u64, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let r = f();
        results.push((n, title, start.elapsed(), Duration::from_secs(limit), r));
    };
    time(1, "surface tcost", 1, &mut c1);
    time(2, "surface cover ratios", 1, &mut c2);
    time(3, "figure-eight torus covers", 10, &mut c3);
    time(4, "whitehead, magic, d2-link sweeps", 30, &mut c4);
    time(5, "seifert tcost and vanishing ratio", 1, &mut c5);
    time(6, "fundamental-domain contraction", 1, &mut c6);
    time(7, "rewriting cost bound", 120, &mut || c7(&mut pool));
    time(8, "euler characteristic and cover route", 120, &mut c8);
    time(9, "lll and certificates", 30, &mut c9);
    time(11, "simplify safety", 300, &mut || c11(&mut pool));
    time(10, "torsion floor and smith form", 60, &mut || c10(&pool));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (n, title, elapsed, limit, r) in results {
        let (ok, detail) = match r {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {n:>2} {} {title}: {detail} [{:.3}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
