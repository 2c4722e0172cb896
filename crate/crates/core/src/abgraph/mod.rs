//! Directed graphs with edges labelled α or β in which every vertex has at
//! most one incoming and one outgoing edge of each label.

mod canon;
mod catalog;

pub use catalog::{read_catalog, write_catalog, CatalogEntry, CatalogError};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::{Generator, Word};

pub type Label = Generator;

pub const LABELS: [Label; 2] = [Generator::Alpha, Generator::Beta];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Label,
}

impl Edge {
    pub fn new(src: usize, dst: usize, label: Label) -> Self {
        Edge { src, dst, label }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("edge {index} ({src}->{dst}) references a vertex outside 0..{vcount}")]
    VertexOutOfRange { index: usize, src: usize, dst: usize, vcount: usize },
    #[error("vertex {vertex} has two outgoing {label:?}-edges")]
    OutDegree { vertex: usize, label: Label },
    #[error("vertex {vertex} has two incoming {label:?}-edges")]
    InDegree { vertex: usize, label: Label },
    #[error("vertex {vertex} has no incident {label:?}-edge")]
    MissingLabel { vertex: usize, label: Label },
    #[error("vertex {vertex} is not connected to vertex 0")]
    Disconnected { vertex: usize },
}

/// Per-label neighbour tables: `out[label][v] = (dst, edge index)`.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    pub out: [Vec<Option<(usize, usize)>>; 2],
    pub inn: [Vec<Option<(usize, usize)>>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GammaComponents {
    pub loops: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
    pub cycles: Vec<Vec<usize>>,
}

impl GammaComponents {
    /// Number of loops, `l_γ`.
    pub fn l(&self) -> usize {
        self.loops.len()
    }

    /// Paths and cycles together, `p_γ`.
    pub fn p(&self) -> usize {
        self.paths.len() + self.cycles.len()
    }

    pub fn count(&self) -> usize {
        self.l() + self.p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStats {
    pub l_alpha: usize,
    pub p_alpha: usize,
    pub l_beta: usize,
    pub p_beta: usize,
    pub fixed_count: usize,
    pub aut_order: u64,
}

impl TreeStats {
    pub fn p_total(&self) -> usize {
        self.p_alpha + self.p_beta
    }

    pub fn l_total(&self) -> usize {
        self.l_alpha + self.l_beta
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ABGraph {
    vcount: usize,
    edges: Vec<Edge>,
}

/// Outcome of tracing a word from one vertex.
#[derive(Debug, Clone)]
pub struct Trace {
    pub end: usize,
    pub visited: Vec<bool>,
    pub traversed: Vec<bool>,
}

impl ABGraph {
    pub fn new(vcount: usize, edges: Vec<Edge>) -> Self {
        ABGraph { vcount, edges }
    }

    /// The lone vertex with an α-loop and a β-loop.
    pub fn single_vertex() -> Self {
        Self::with_implied_loops(1, Vec::new())
    }

    /// Adds a γ-loop at every vertex with no incident γ-edge, following the
    /// drawing convention that omits loops.
    pub fn with_implied_loops(vcount: usize, mut edges: Vec<Edge>) -> Self {
        for label in LABELS {
            for v in 0..vcount {
                let touched = edges.iter().any(|e| e.label == label && (e.src == v || e.dst == v));
                if !touched {
                    edges.push(Edge::new(v, v, label));
                }
            }
        }
        ABGraph { vcount, edges }
    }

    pub fn vcount(&self) -> usize {
        self.vcount
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn validate(&self) -> Result<(), Violation> {
        if self.vcount == 0 {
            return Err(Violation::NoVertices);
        }
        for (index, e) in self.edges.iter().enumerate() {
            if e.src >= self.vcount || e.dst >= self.vcount {
                return Err(Violation::VertexOutOfRange { index, src: e.src, dst: e.dst, vcount: self.vcount });
            }
        }
        let adj = self.try_adjacency()?;
        for v in 0..self.vcount {
            for label in LABELS {
                let g = label.index();
                if adj.out[g][v].is_none() && adj.inn[g][v].is_none() {
                    return Err(Violation::MissingLabel { vertex: v, label });
                }
            }
        }
        let seen = self.reachable_from(0, &adj);
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Violation::Disconnected { vertex: v });
        }
        Ok(())
    }

    fn try_adjacency(&self) -> Result<Adjacency, Violation> {
        let n = self.vcount;
        let mut adj = Adjacency { out: [vec![None; n], vec![None; n]], inn: [vec![None; n], vec![None; n]] };
        for (i, e) in self.edges.iter().enumerate() {
            let g = e.label.index();
            if adj.out[g][e.src].is_some() {
                return Err(Violation::OutDegree { vertex: e.src, label: e.label });
            }
            adj.out[g][e.src] = Some((e.dst, i));
            if adj.inn[g][e.dst].is_some() {
                return Err(Violation::InDegree { vertex: e.dst, label: e.label });
            }
            adj.inn[g][e.dst] = Some((e.src, i));
        }
        Ok(adj)
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        self.try_adjacency().expect("degree bounds hold")
    }

    fn reachable_from(&self, s: usize, adj: &Adjacency) -> Vec<bool> {
        let mut seen = vec![false; self.vcount];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for g in 0..2 {
                for nb in [adj.out[g][v], adj.inn[g][v]].into_iter().flatten() {
                    if !seen[nb.0] {
                        seen[nb.0] = true;
                        stack.push(nb.0);
                    }
                }
            }
        }
        seen
    }

    pub fn gamma_components(&self, label: Label) -> GammaComponents {
        let adj = self.adjacency();
        let g = label.index();
        let mut seen = vec![false; self.vcount];
        let mut out = GammaComponents::default();
        for v in 0..self.vcount {
            if adj.out[g][v].map(|x| x.0) == Some(v) {
                seen[v] = true;
                out.loops.push(v);
            }
        }
        for v in 0..self.vcount {
            if seen[v] || adj.inn[g][v].is_some() {
                continue;
            }
            let mut path = vec![v];
            seen[v] = true;
            let mut x = v;
            while let Some((y, _)) = adj.out[g][x] {
                seen[y] = true;
                path.push(y);
                x = y;
            }
            out.paths.push(path);
        }
        for v in 0..self.vcount {
            if seen[v] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = v;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = adj.out[g][x].expect("vertex on a cycle has an out-edge").0;
            }
            out.cycles.push(cyc);
        }
        out
    }

    /// True when every undirected cycle is monochromatic. Decided by the
    /// bipartite graph of monochromatic components being a tree, and
    /// cross-checked against the component count `|V| + 1`.
    pub fn is_ab_tree(&self) -> bool {
        let comp = [self.component_ids(Generator::Alpha), self.component_ids(Generator::Beta)];
        let na = comp[0].iter().max().map_or(0, |&m| m + 1);
        let nb = comp[1].iter().max().map_or(0, |&m| m + 1);
        let mut uf = UnionFind::new(na + nb);
        let mut acyclic = true;
        for v in 0..self.vcount {
            if !uf.union(comp[0][v], na + comp[1][v]) {
                acyclic = false;
            }
        }
        let connected = (0..na + nb).all(|i| uf.find(i) == uf.find(0));
        let b_tree = acyclic && connected && na + nb == self.vcount + 1;
        let s = self.component_counts();
        let by_count = s.0 + s.1 + s.2 + s.3 == self.vcount + 1;
        assert_eq!(b_tree, by_count, "component-graph and count criteria disagree");
        b_tree
    }

    fn component_ids(&self, label: Label) -> Vec<usize> {
        let c = self.gamma_components(label);
        let mut ids = vec![usize::MAX; self.vcount];
        let mut next = 0;
        for &v in &c.loops {
            ids[v] = next;
            next += 1;
        }
        for comp in c.paths.iter().chain(c.cycles.iter()) {
            for &v in comp {
                ids[v] = next;
            }
            next += 1;
        }
        ids
    }

    /// `(l_α, p_α, l_β, p_β)`.
    pub fn component_counts(&self) -> (usize, usize, usize, usize) {
        let a = self.gamma_components(Generator::Alpha);
        let b = self.gamma_components(Generator::Beta);
        (a.l(), a.p(), b.l(), b.p())
    }

    /// `(p_α + p_β, l_α + l_β)`: the exponents of `δ` and `1 - δ` in `δ_T`.
    pub fn delta_exponents(&self) -> (usize, usize) {
        let (la, pa, lb, pb) = self.component_counts();
        (pa + pb, la + lb)
    }

    /// Follows `base` repeated `reps` times from `start`; `None` when an
    /// edge is missing.
    pub fn trace(&self, base: &Word, reps: usize, start: usize) -> Option<Trace> {
        let adj = self.adjacency();
        self.trace_with(&adj, base, reps, start)
    }

    fn trace_with(&self, adj: &Adjacency, base: &Word, reps: usize, start: usize) -> Option<Trace> {
        let mut visited = vec![false; self.vcount];
        let mut traversed = vec![false; self.edges.len()];
        let mut x = start;
        visited[x] = true;
        for _ in 0..reps {
            for l in base.letters() {
                let g = l.gen.index();
                let step = if l.inverse { adj.inn[g][x] } else { adj.out[g][x] };
                let (y, e) = step?;
                traversed[e] = true;
                visited[y] = true;
                x = y;
            }
        }
        Some(Trace { end: x, visited, traversed })
    }

    /// Vertices from which `base^reps` closes up, visits every vertex and
    /// covers every edge. A monochromatic cycle of length at least two
    /// counts as covered when at most one of its edges is missed: a host
    /// whose cycles all have that length closes the remaining edge.
    pub fn admission_power(&self, base: &Word, reps: usize) -> Vec<usize> {
        self.admission_impl(base, reps, true)
    }

    pub fn admission(&self, w: &Word) -> Vec<usize> {
        self.admission_power(w, 1)
    }

    /// Admission requiring every edge, cycle edges included, to be traversed.
    pub fn admission_strict(&self, base: &Word, reps: usize) -> Vec<usize> {
        self.admission_impl(base, reps, false)
    }

    fn admission_impl(&self, base: &Word, reps: usize, cycle_slack: bool) -> Vec<usize> {
        let adj = self.adjacency();
        let cycle_edges: Vec<Vec<usize>> = if cycle_slack {
            LABELS
                .iter()
                .flat_map(|&label| {
                    let g = label.index();
                    self.gamma_components(label)
                        .cycles
                        .into_iter()
                        .map(|c| c.iter().map(|&v| adj.out[g][v].unwrap().1).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut in_cycle = vec![false; self.edges.len()];
        for c in &cycle_edges {
            for &e in c {
                in_cycle[e] = true;
            }
        }
        (0..self.vcount)
            .filter(|&v| {
                let Some(t) = self.trace_with(&adj, base, reps, v) else {
                    return false;
                };
                if t.end != v || t.visited.iter().any(|&s| !s) {
                    return false;
                }
                let plain_ok = t.traversed.iter().zip(&in_cycle).all(|(&tr, &c)| tr || c);
                plain_ok && cycle_edges.iter().all(|c| c.iter().filter(|&&e| !t.traversed[e]).count() <= 1)
            })
            .collect()
    }

    pub fn stats(&self, w: &Word) -> TreeStats {
        self.stats_power(w, 1)
    }

    pub fn stats_power(&self, base: &Word, reps: usize) -> TreeStats {
        let (l_alpha, p_alpha, l_beta, p_beta) = self.component_counts();
        TreeStats {
            l_alpha,
            p_alpha,
            l_beta,
            p_beta,
            fixed_count: self.admission_power(base, reps).len(),
            aut_order: self.automorphism_order(),
        }
    }

    /// Permutes vertex names: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> ABGraph {
        let mut edges: Vec<Edge> =
            self.edges.iter().map(|e| Edge::new(perm[e.src], perm[e.dst], e.label)).collect();
        edges.sort();
        ABGraph { vcount: self.vcount, edges }
    }

    /// Longest monochromatic path, in vertices (0 if there are none).
    pub fn max_path_vertices(&self) -> usize {
        LABELS
            .iter()
            .flat_map(|&l| self.gamma_components(l).paths)
            .map(|p| p.len())
            .max()
            .unwrap_or(0)
    }

    pub fn cycle_lengths(&self) -> BTreeSet<usize> {
        LABELS.iter().flat_map(|&l| self.gamma_components(l).cycles).map(|c| c.len()).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
