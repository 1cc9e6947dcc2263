//! Reidemeister–Schreier rewriting: a presentation of the finite-index
//! subgroup encoded by a coset table.

use std::collections::{HashSet, VecDeque};

use crate::cosets::{CosetTable, TableError};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

/// Breadth-first spanning tree of the coset graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierTransversal {
    /// Representative word of each coset, tracing from coset 0.
    pub representative_word: Vec<Word>,
    /// Tree edges as `(coset, letter)` in the direction they were found.
    pub tree_edges: Vec<(usize, Letter)>,
    /// `is_tree[c * generators + g]` for the positive edge `c --g--> c·g`.
    is_tree: Vec<bool>,
    generators: usize,
}

impl SchreierTransversal {
    /// Whether the positively oriented edge leaving `coset` along `generator`
    /// belongs to the tree.
    pub fn is_tree_edge(&self, coset: usize, generator: usize) -> bool {
        self.is_tree[coset * self.generators + generator]
    }
}

/// Breadth-first from coset 0, letters in code order (generator ascending,
/// positive before inverse).
pub fn schreier_transversal(t: &CosetTable) -> SchreierTransversal {
    let n = t.generator_count();
    let mut reps: Vec<Option<Word>> = vec![None; t.index()];
    let mut is_tree = vec![false; t.index() * n];
    let mut tree_edges = Vec::new();
    reps[0] = Some(Word::empty());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for code in 0..t.columns() {
            let l = Letter::from_code(code);
            let d = t.act(c, l);
            if reps[d].is_some() {
                continue;
            }
            let mut w = reps[c].clone().unwrap();
            w.push_letter(l);
            reps[d] = Some(w);
            tree_edges.push((c, l));
            let (from, g) = if l.is_inverse() { (d, l.generator()) } else { (c, l.generator()) };
            is_tree[from * n + g] = true;
            queue.push_back(d);
        }
    }
    SchreierTransversal {
        representative_word: reps.into_iter().map(|r| r.expect("table is transitive")).collect(),
        tree_edges,
        is_tree,
        generators: n,
    }
}

/// Subgroup presentation together with the bookkeeping that produced it.
#[derive(Debug, Clone)]
pub struct Rewritten {
    pub presentation: Presentation,
    pub transversal: SchreierTransversal,
    /// `(coset, generator)` of each Schreier generator, in generator order.
    pub schreier_edges: Vec<(usize, usize)>,
    /// Each Schreier generator as a freely reduced word in the ambient
    /// generators: `rep(c) g rep(c·g)^-1`.
    pub schreier_words: Vec<Word>,
    /// Rewritten relators before reduction, in (relator, coset) order.
    pub raw_relators: Vec<Word>,
}

/// Rewrites `p` along `t`. Generators of the result are the non-tree edges
/// `(c, g)` ordered by coset then generator and named `g_c` with `c`
/// 1-based; relators are the rewrites of each relator at each coset,
/// freely and cyclically reduced, empty ones dropped.
pub fn rewrite_presentation(p: &Presentation, t: &CosetTable) -> Result<Rewritten, TableError> {
    t.validate(p)?;
    let n = p.generator_count();
    let tr = schreier_transversal(t);
    let mut edge_gen = vec![usize::MAX; t.index() * n];
    let mut schreier_edges = Vec::new();
    let mut names = Vec::new();
    let mut taken: HashSet<String> = HashSet::new();
    for c in 0..t.index() {
        for g in 0..n {
            if tr.is_tree_edge(c, g) {
                continue;
            }
            edge_gen[c * n + g] = schreier_edges.len();
            schreier_edges.push((c, g));
            let mut name = format!("{}_{}", p.generator_names()[g], c + 1);
            while !taken.insert(name.clone()) {
                name.push('_');
            }
            names.push(name);
        }
    }
    let schreier_words = schreier_edges
        .iter()
        .map(|&(c, g)| {
            let d = t.act(c, Letter::pos(g));
            let mut w = tr.representative_word[c].clone();
            w.push_letter(Letter::pos(g));
            w.concat(&tr.representative_word[d].inverse()).free_reduce()
        })
        .collect();
    let mut raw_relators = Vec::with_capacity(p.relator_count() * t.index());
    for r in p.relators() {
        for c in 0..t.index() {
            let mut e = c;
            let mut out = Vec::new();
            for &l in r.iter() {
                let g = l.generator();
                let (from, next) = if l.is_inverse() {
                    let d = t.act(e, l);
                    (d, d)
                } else {
                    (e, t.act(e, l))
                };
                let s = edge_gen[from * n + g];
                if s != usize::MAX {
                    out.push(Letter::new(s, l.is_inverse()));
                }
                e = next;
            }
            raw_relators.push(Word::new(out));
        }
    }
    let relators = raw_relators
        .iter()
        .map(|w| w.cyclic_reduce())
        .filter(|w| !w.is_empty())
        .collect();
    let presentation = Presentation::new(names, relators).expect("schreier names are distinct identifiers");
    Ok(Rewritten {
        presentation,
        transversal: tr,
        schreier_edges,
        schreier_words,
        raw_relators,
    })
}
