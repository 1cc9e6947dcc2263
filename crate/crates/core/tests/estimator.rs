use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use plength::estimator::{
    family_sweep, free_product_combine, multiplicativity_check, stable_upper_bound, EstimateRecord, Grid,
};
use plength::families::surface;
use plength::fixtures::corpus;
use plength::tietze::{simplify, SimplifyBudget};
use plength::{low_index_subgroups, CosetTable, Presentation};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn budget() -> SimplifyBudget {
    SimplifyBudget::default()
}

#[test]
fn free_group_has_zero_bound() {
    let p = Presentation::parse("< a, b | >").unwrap();
    let e = stable_upper_bound(&p, 3, budget());
    assert!(e.best.ratio.is_zero());
    assert_eq!(e.all.len(), 11);
}

#[test]
fn triangulated_genus_two_at_index_two() {
    let p = surface(2).unwrap().presentation.triangulate().presentation;
    let e = stable_upper_bound(&p, 2, budget());
    assert!(e.best.ratio <= q(6, 1), "best {}", e.best.ratio);
    // Simplification recovers a one-relator genus-3 cover: cost 10 on 2 sheets.
    assert!(e.best.ratio <= q(5, 1), "best {}", e.best.ratio);
}

#[test]
fn records_are_consistent_with_the_rewriting_bound() {
    for f in corpus() {
        let tri = f.presentation.triangulate().presentation;
        let base = tri.tcost().value();
        let e = stable_upper_bound(&tri, 3, budget());
        assert!(e.failures.is_empty());
        for r in &e.all {
            assert!(r.simplified_cost <= r.raw_cost, "{}", f.name);
            assert!(r.raw_cost <= r.index as u64 * base, "{}", f.name);
            assert_eq!(r.ratio, q(r.simplified_cost as i64, r.index as i64));
        }
        let own = simplify(&tri, budget()).presentation.tcost().value();
        assert!(e.best.ratio <= q(own as i64, 1), "{}", f.name);
    }
}

#[test]
fn best_ratio_is_nonincreasing_in_max_index() {
    for f in corpus() {
        let mut previous: Option<BigRational> = None;
        for k in 1..=4 {
            let r = stable_upper_bound(&f.presentation, k, budget()).best.ratio;
            if let Some(p) = &previous {
                assert!(r <= *p, "{} at index {k}", f.name);
            }
            previous = Some(r);
        }
    }
}

#[test]
fn estimates_are_deterministic() {
    let p = corpus().into_iter().find(|f| f.name == "figure8_base").unwrap().presentation;
    let a = stable_upper_bound(&p, 3, budget());
    let b = stable_upper_bound(&p, 3, budget());
    assert_eq!(a.all, b.all);
    assert_eq!(a.best, b.best);
}

fn index_two(p: &Presentation) -> CosetTable {
    low_index_subgroups(p, 2).into_iter().find(|t| t.index() == 2).unwrap()
}

#[test]
fn multiplicativity_at_index_one_coincides() {
    let p = Presentation::parse("< x | x^6 >").unwrap();
    let r = multiplicativity_check(&p, &CosetTable::trivial(1), 2, budget()).unwrap();
    assert_eq!(r.bound_g, r.bound_h);
    assert!(r.subgroup_side_holds && r.ambient_side_holds);
}

#[test]
fn multiplicativity_cyclic_six() {
    let p = Presentation::parse("< x | x^6 >").unwrap();
    let r = multiplicativity_check(&p, &index_two(&p), 1, budget()).unwrap();
    assert_eq!(r.bound_g, q(1, 2));
    assert_eq!(r.bound_h, q(1, 1));
    assert!(r.subgroup_side_holds);
}

#[test]
fn multiplicativity_cyclic_six_wider_search() {
    // Searching G to index 4 reaches the index-3 subgroup, so bound(G) drops
    // to 0 while H = Z/3 stays at 1: the subgroup-side inequality fails for
    // upper bounds, though the other side holds.
    let p = Presentation::parse("< x | x^6 >").unwrap();
    let r = multiplicativity_check(&p, &index_two(&p), 2, budget()).unwrap();
    assert!(r.bound_g.is_zero());
    assert_eq!(r.bound_h, q(1, 1));
    assert!(!r.subgroup_side_holds);
    assert!(r.ambient_side_holds);
}

#[test]
fn multiplicativity_genus_two() {
    let p = surface(2).unwrap().presentation;
    let r = multiplicativity_check(&p, &index_two(&p), 2, budget()).unwrap();
    assert!(r.subgroup_side_holds, "bound(G) = {}, bound(H) = {}", r.bound_g, r.bound_h);
}

fn record(ratio: BigRational) -> EstimateRecord {
    EstimateRecord {
        subgroup: CosetTable::trivial(0),
        index: 1,
        raw_cost: 0,
        simplified_cost: 0,
        ratio,
        budget_exhausted: false,
    }
}

#[test]
fn free_product_combination() {
    assert_eq!(free_product_combine(&record(q(402, 100)), &record(q(0, 1))), q(402, 100));
    assert_eq!(free_product_combine(&record(q(6, 1)), &record(q(15, 1))), q(21, 1));
    let p = surface(2).unwrap().presentation;
    let best = stable_upper_bound(&p, 2, budget()).best;
    assert_eq!(free_product_combine(&best, &best), &best.ratio * BigRational::from_integer(BigInt::from(2)));
}

#[test]
fn sweeps() {
    let s = family_sweep("figure8", &Grid::parse("m=48..50;n=48..50").unwrap()).unwrap();
    let best = s.argmin().unwrap();
    assert_eq!(best.params, vec![50, 50]);
    assert_eq!(best.ratio, q(15406, 2500));

    let s = family_sweep("seifert", &Grid::parse("g=2;e=1;d=1..30").unwrap()).unwrap();
    let best = s.argmin().unwrap();
    assert_eq!(best.params, vec![2, 1, 30]);
    assert_eq!(best.ratio, q(8 * 31 + 1 - 2, 900));
    assert!(best.ratio < q(3, 10));

    let s = family_sweep("punctured", &Grid::parse("g=1..3;b=1..2").unwrap()).unwrap();
    let costs: Vec<u64> = s.rows.iter().map(|r| r.tcost).collect();
    assert_eq!(costs, vec![2, 4, 6, 8, 10, 12]);
}
