//! Combinatorial 2-complexes: presentation complexes, finite covers, tree
//! contraction and cones over edge paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosets::CosetTable;
use crate::presentation::Presentation;
use crate::rewrite::schreier_transversal;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("relator {relator} has length {length}; triangulate first")]
    NotTriangular { relator: usize, length: usize },
    #[error("complex has {vertices} vertices; covers are built over one-vertex complexes")]
    NotOneVertex { vertices: usize },
    #[error("complex has {edges} edges but the table acts by {generators} generators")]
    EdgeMismatch { edges: usize, generators: usize },
    #[error("tree edge {0} closes a cycle")]
    TreeHasCycle(usize),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("path {path} is broken at step {step}")]
    BrokenPath { path: usize, step: usize },
    #[error("got {paths} paths but {labels} labels")]
    LabelCount { paths: usize, labels: usize },
}

/// An edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge { edge, reversed: false }
    }

    pub fn backward(edge: usize) -> Self {
        OrientedEdge { edge, reversed: true }
    }

    pub fn inverse(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

pub type EdgePath = Vec<OrientedEdge>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComplex {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    /// Closed boundary paths, one per 2-cell.
    pub faces: Vec<EdgePath>,
    pub isotropy: Vec<Option<String>>,
}

impl TwoComplex {
    fn endpoints(&self, e: OrientedEdge) -> (usize, usize) {
        let edge = &self.edges[e.edge];
        if e.reversed {
            (edge.target, edge.source)
        } else {
            (edge.source, edge.target)
        }
    }

    /// Checks that `path` is a connected edge path; returns its endpoints.
    fn check_path(&self, path: &[OrientedEdge], index: usize) -> Result<Option<(usize, usize)>, ComplexError> {
        let mut ends: Option<(usize, usize)> = None;
        for (step, &e) in path.iter().enumerate() {
            if e.edge >= self.edges.len() {
                return Err(ComplexError::UnknownEdge(e.edge));
            }
            let (s, t) = self.endpoints(e);
            ends = match ends {
                None => Some((s, t)),
                Some((first, last)) if last == s => Some((first, t)),
                Some(_) => return Err(ComplexError::BrokenPath { path: index, step }),
            };
        }
        Ok(ends)
    }

    pub fn triangle_count(&self) -> usize {
        self.faces.iter().filter(|f| f.len() == 3).count()
    }

    pub fn bigon_count(&self) -> usize {
        self.faces.iter().filter(|f| f.len() == 2).count()
    }

    /// Vertices minus edges plus faces.
    pub fn euler_char(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Reads a one-vertex complex back as a presentation: edges become
    /// generators, faces relators.
    pub fn to_presentation(&self) -> Result<Presentation, ComplexError> {
        if self.vertex_count != 1 {
            return Err(ComplexError::NotOneVertex {
                vertices: self.vertex_count,
            });
        }
        let names = self.edges.iter().map(|e| e.label.clone()).collect();
        let relators = self
            .faces
            .iter()
            .map(|f| f.iter().map(|e| Letter::new(e.edge, e.reversed)).collect::<Word>())
            .collect();
        Ok(Presentation::new(names, relators).expect("edge labels are distinct identifiers"))
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph complex {\n");
        for v in 0..self.vertex_count {
            match self.isotropy.get(v).and_then(|l| l.as_ref()) {
                Some(l) => out.push_str(&format!("  v{v} [label=\"{v}:{l}\"];\n")),
                None => out.push_str(&format!("  v{v};\n")),
            }
        }
        for e in &self.edges {
            out.push_str(&format!("  v{} -> v{} [label=\"{}\"];\n", e.source, e.target, e.label));
        }
        out.push_str("}\n");
        out
    }

    /// JSON with faces as signed 1-based edge ordinals.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            vertex_count: usize,
            edges: &'a [Edge],
            faces: Vec<Vec<i64>>,
            isotropy: &'a [Option<String>],
        }
        let faces = self
            .faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|e| if e.reversed { -(e.edge as i64 + 1) } else { e.edge as i64 + 1 })
                    .collect()
            })
            .collect();
        serde_json::to_string(&Out {
            vertex_count: self.vertex_count,
            edges: &self.edges,
            faces,
            isotropy: &self.isotropy,
        })
        .expect("plain data serializes")
    }
}

/// One vertex, an edge per generator, a face per (cyclically reduced,
/// nonempty) relator. Relators must have length at most 3.
pub fn from_presentation(p: &Presentation) -> Result<TwoComplex, ComplexError> {
    let mut faces = Vec::new();
    for (i, r) in p.relators().iter().enumerate() {
        let r = r.cyclic_reduce();
        if r.len() > 3 {
            return Err(ComplexError::NotTriangular { relator: i, length: r.len() });
        }
        if !r.is_empty() {
            faces.push(r.iter().map(|l| OrientedEdge { edge: l.generator(), reversed: l.is_inverse() }).collect());
        }
    }
    Ok(TwoComplex {
        vertex_count: 1,
        edges: p
            .generator_names()
            .iter()
            .map(|n| Edge {
                source: 0,
                target: 0,
                label: n.clone(),
            })
            .collect(),
        faces,
        isotropy: vec![None],
    })
}

/// The covering complex of a one-vertex complex determined by a coset
/// table. Vertex `c` is coset `c`; the lift of edge `g` at `c` has id
/// `c * edges + g` and label `g_(c+1)`; faces are ordered by base face,
/// then coset.
pub fn cover(c: &TwoComplex, t: &CosetTable) -> Result<TwoComplex, ComplexError> {
    if c.vertex_count != 1 {
        return Err(ComplexError::NotOneVertex {
            vertices: c.vertex_count,
        });
    }
    let n = c.edges.len();
    if n != t.generator_count() {
        return Err(ComplexError::EdgeMismatch {
            edges: n,
            generators: t.generator_count(),
        });
    }
    let d = t.index();
    let mut edges = Vec::with_capacity(d * n);
    for coset in 0..d {
        for (g, e) in c.edges.iter().enumerate() {
            edges.push(Edge {
                source: coset,
                target: t.act(coset, Letter::pos(g)),
                label: format!("{}_{}", e.label, coset + 1),
            });
        }
    }
    let mut faces = Vec::with_capacity(d * c.faces.len());
    for face in &c.faces {
        for start in 0..d {
            let mut at = start;
            let mut lifted = Vec::with_capacity(face.len());
            for &e in face {
                let l = Letter::new(e.edge, e.reversed);
                let next = t.act(at, l);
                let from = if e.reversed { next } else { at };
                lifted.push(OrientedEdge {
                    edge: from * n + e.edge,
                    reversed: e.reversed,
                });
                at = next;
            }
            faces.push(lifted);
        }
    }
    Ok(TwoComplex {
        vertex_count: d,
        edges,
        faces,
        isotropy: vec![c.isotropy[0].clone(); d],
    })
}

/// Edge ids of the breadth-first spanning tree of the coset graph, in the
/// numbering used by [`cover`].
pub fn bfs_tree_edges(t: &CosetTable) -> Vec<usize> {
    let n = t.generator_count();
    schreier_transversal(t)
        .tree_edges
        .iter()
        .map(|&(c, l)| {
            let from = if l.is_inverse() { t.act(c, l) } else { c };
            from * n + l.generator()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub complex: TwoComplex,
    /// Faces whose whole boundary lay in the tree and were removed.
    pub dropped_faces: usize,
}

/// Collapses each tree of a spanning forest to a point. Faces keep their
/// boundary minus tree edges; faces left with an empty boundary are
/// dropped and counted. One-edge faces are kept, since they still kill a
/// generator.
pub fn contract_tree(c: &TwoComplex, tree: &[usize]) -> Result<Contraction, ComplexError> {
    let mut parent: Vec<usize> = (0..c.vertex_count).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut in_tree = vec![false; c.edges.len()];
    for &e in tree {
        let edge = c.edges.get(e).ok_or(ComplexError::UnknownEdge(e))?;
        let (a, b) = (find(&mut parent, edge.source), find(&mut parent, edge.target));
        if a == b || in_tree[e] {
            return Err(ComplexError::TreeHasCycle(e));
        }
        parent[a.max(b)] = a.min(b);
        in_tree[e] = true;
    }
    let mut component = vec![usize::MAX; c.vertex_count];
    let mut count = 0;
    let mut isotropy = Vec::new();
    for v in 0..c.vertex_count {
        let r = find(&mut parent, v);
        if component[r] == usize::MAX {
            component[r] = count;
            count += 1;
            isotropy.push(c.isotropy.get(v).cloned().flatten());
        }
        component[v] = component[r];
    }
    let mut new_id = vec![usize::MAX; c.edges.len()];
    let mut edges = Vec::new();
    for (i, e) in c.edges.iter().enumerate() {
        if !in_tree[i] {
            new_id[i] = edges.len();
            edges.push(Edge {
                source: component[e.source],
                target: component[e.target],
                label: e.label.clone(),
            });
        }
    }
    let mut faces = Vec::new();
    let mut dropped = 0;
    for f in &c.faces {
        let kept: EdgePath = f
            .iter()
            .filter(|e| !in_tree[e.edge])
            .map(|e| OrientedEdge {
                edge: new_id[e.edge],
                reversed: e.reversed,
            })
            .collect();
        if kept.is_empty() {
            dropped += 1;
        } else {
            faces.push(kept);
        }
    }
    Ok(Contraction {
        complex: TwoComplex {
            vertex_count: count,
            edges,
            faces,
            isotropy,
        },
        dropped_faces: dropped,
    })
}

/// Attaches a cone over each path: a new vertex carrying the label, one
/// cone edge per path vertex (a closed path reuses its first), and one
/// triangle per path edge.
pub fn attach_cones(c: &TwoComplex, paths: &[EdgePath], labels: &[String]) -> Result<TwoComplex, ComplexError> {
    if paths.len() != labels.len() {
        return Err(ComplexError::LabelCount {
            paths: paths.len(),
            labels: labels.len(),
        });
    }
    let mut out = c.clone();
    out.isotropy.resize(out.vertex_count, None);
    for (pi, (path, label)) in paths.iter().zip(labels).enumerate() {
        let Some((first, last)) = c.check_path(path, pi)? else {
            continue;
        };
        let apex = out.vertex_count;
        out.vertex_count += 1;
        out.isotropy.push(Some(label.clone()));
        let k = path.len();
        let closed = first == last;
        let spokes = if closed { k } else { k + 1 };
        let base = out.edges.len();
        let mut at = first;
        for i in 0..spokes {
            out.edges.push(Edge {
                source: at,
                target: apex,
                label: format!("cone{}_{}", pi + 1, i + 1),
            });
            if i < k {
                at = c.endpoints(path[i]).1;
            }
        }
        for (i, &e) in path.iter().enumerate() {
            let next = if closed && i + 1 == k { 0 } else { i + 1 };
            out.faces.push(vec![e, OrientedEdge::forward(base + next), OrientedEdge::backward(base + i)]);
        }
    }
    Ok(out)
}
