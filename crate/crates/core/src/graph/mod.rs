//! Undirected graphs, oracle access with query accounting, overlays and I/O.

pub mod generators;
mod io;
mod oracle;
mod overlay;

pub use io::{load_edge_list, parse_edge_list, store_edge_list, write_edge_list};
pub use oracle::{
    implicit_backend, BackendSpec, BlockBackend, CompleteBackend, GraphBackend, OracleHandle,
    QueryCounts,
};
pub use overlay::{overlay_union, OverlayGraph};

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

/// Immutable undirected graph with sorted adjacency lists.
///
/// Vertices are `0..n`. Each unordered pair appears at most once; repeated
/// insertions of the same pair accumulate weight. Self-loops are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    num_edges: usize,
    weighted: bool,
}

/// Same carrier type; the alias marks places where weights matter.
pub type WeightedGraph = StaticGraph;

/// One undirected edge, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl StaticGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
            num_edges: 0,
            weighted: false,
        }
    }

    /// Unit-weight graph from endpoint pairs. Duplicate pairs merge (weight 2, ...).
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)), false)
    }

    /// Weighted graph; repeated pairs accumulate in input order.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::build(n, edges, true)
    }

    fn build<I>(n: usize, edges: I, weighted: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return domain(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            if !(w.is_finite() && w > 0.0) {
                return domain(format!("edge ({u},{v}) has non-positive weight {w}"));
            }
            list.push((u.min(v), u.max(v), w));
        }
        // stable: equal pairs keep input order, so merged sums are reproducible
        list.sort_by_key(|&(u, v, _)| (u, v));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(list.len());
        let mut has_multi = false;
        for (u, v, w) in list {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => {
                    last.2 += w;
                    has_multi = true;
                }
                _ => merged.push((u, v, w)),
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &merged {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(x, _)| x);
        }
        Ok(Self {
            n,
            num_edges: merged.len(),
            adj,
            weighted: weighted || has_multi,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// True when any edge weight may differ from 1.
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Number of distinct neighbors.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sum of incident weights.
    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbors of `v` sorted by id, with weights.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// Edges with `u < v`, ordered lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| Edge { u, v, w })
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|e| e.w).sum()
    }

    /// `Cut(U)`: total weight of edges with exactly one endpoint in `U`.
    pub fn cut_value(&self, in_set: &[bool]) -> f64 {
        assert_eq!(in_set.len(), self.n, "membership vector has wrong length");
        self.edges()
            .filter(|e| in_set[e.u] != in_set[e.v])
            .map(|e| e.w)
            .sum()
    }

    /// `Cut(U)` for an explicit vertex list.
    pub fn cut_value_of(&self, set: &[usize]) -> Result<f64> {
        Ok(self.cut_value(&self.membership(set)?))
    }

    pub fn membership(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return domain(format!("vertex {v} out of range for n={}", self.n));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Component label per vertex, labels assigned in order of smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &(y, _) in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().0 == 1
    }

    /// Union with another graph on the same vertex set (weights add).
    pub fn union(&self, other: &StaticGraph) -> Result<StaticGraph> {
        if self.n != other.n {
            return Err(Error::Domain(format!(
                "vertex counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        Self::build(
            self.n,
            self.edges().chain(other.edges()).map(|e| (e.u, e.v, e.w)),
            self.weighted || other.weighted,
        )
    }

    /// Disjoint union; the second graph's vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &StaticGraph) -> StaticGraph {
        let shift = self.n;
        let edges = self
            .edges()
            .map(|e| (e.u, e.v, e.w))
            .chain(other.edges().map(|e| (e.u + shift, e.v + shift, e.w)));
        Self::build(self.n + other.n, edges, self.weighted || other.weighted)
            .expect("disjoint union of valid graphs is valid")
    }

    /// Same graph with every weight passed through `f`; zero results drop the edge.
    pub fn map_weights(&self, mut f: impl FnMut(f64) -> f64) -> Result<StaticGraph> {
        let edges: Vec<_> = self
            .edges()
            .filter_map(|e| {
                let w = f(e.w);
                (w != 0.0).then_some((e.u, e.v, w))
            })
            .collect();
        Self::build(self.n, edges, true)
    }
}
