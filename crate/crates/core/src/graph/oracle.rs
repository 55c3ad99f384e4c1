//! The three-oracle access model with per-handle query accounting.
//!
//! A graph is read only through `vertex(i)`, `degree(v)` and `neighbor(v, i)`.
//! Indices passed to the oracles are 1-based like the model they implement;
//! vertex ids are dense `0..n`.

use super::StaticGraph;
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Raw, uncounted graph access. `idx` is 0-based here; handles do the
/// 1-based translation and the bookkeeping.
pub trait GraphBackend: Send + Sync {
    fn num_vertices(&self) -> usize;
    fn degree(&self, v: usize) -> usize;
    fn neighbor(&self, v: usize, idx: usize) -> usize;
    /// Edge count if known in closed form.
    fn num_edges(&self) -> Option<usize> {
        None
    }
    fn describe(&self) -> String;
}

impl GraphBackend for StaticGraph {
    fn num_vertices(&self) -> usize {
        self.n()
    }
    fn degree(&self, v: usize) -> usize {
        StaticGraph::degree(self, v)
    }
    fn neighbor(&self, v: usize, idx: usize) -> usize {
        self.neighbors(v)[idx].0
    }
    fn num_edges(&self) -> Option<usize> {
        Some(StaticGraph::num_edges(self))
    }
    fn describe(&self) -> String {
        format!(
            "explicit(n={}, m={})",
            self.n(),
            StaticGraph::num_edges(self)
        )
    }
}

/// `K_n` answered arithmetically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteBackend {
    pub n: usize,
}

impl GraphBackend for CompleteBackend {
    fn num_vertices(&self) -> usize {
        self.n
    }
    fn degree(&self, _v: usize) -> usize {
        self.n - 1
    }
    fn neighbor(&self, v: usize, idx: usize) -> usize {
        if idx < v {
            idx
        } else {
            idx + 1
        }
    }
    fn num_edges(&self) -> Option<usize> {
        Some(self.n * self.n.saturating_sub(1) / 2)
    }
    fn describe(&self) -> String {
        format!("complete(n={})", self.n)
    }
}

/// Block graph: vertices partitioned into consecutive blocks; a block pair
/// is either fully joined or empty (`connect[a][a]` makes block `a` a clique).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockBackend {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    connect: Vec<Vec<bool>>,
}

impl BlockBackend {
    pub fn new(sizes: Vec<usize>, connect: Vec<Vec<bool>>) -> Result<Self> {
        let b = sizes.len();
        if b == 0 || connect.len() != b || connect.iter().any(|row| row.len() != b) {
            return Err(Error::Config(
                "block connectivity must be a square matrix matching the block count".into(),
            ));
        }
        for a in 0..b {
            for c in 0..b {
                if connect[a][c] != connect[c][a] {
                    return Err(Error::Config("block connectivity must be symmetric".into()));
                }
            }
        }
        let mut offsets = Vec::with_capacity(b + 1);
        offsets.push(0);
        for s in &sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        Ok(Self {
            sizes,
            offsets,
            connect,
        })
    }

    fn block_of(&self, v: usize) -> usize {
        self.offsets.partition_point(|&o| o <= v) - 1
    }
}

impl GraphBackend for BlockBackend {
    fn num_vertices(&self) -> usize {
        *self.offsets.last().unwrap()
    }
    fn degree(&self, v: usize) -> usize {
        let b = self.block_of(v);
        let reach: usize = (0..self.sizes.len())
            .filter(|&c| self.connect[b][c])
            .map(|c| self.sizes[c])
            .sum();
        reach - usize::from(self.connect[b][b])
    }
    fn neighbor(&self, v: usize, mut idx: usize) -> usize {
        let b = self.block_of(v);
        for c in 0..self.sizes.len() {
            if !self.connect[b][c] {
                continue;
            }
            let avail = self.sizes[c] - usize::from(c == b);
            if idx < avail {
                let x = self.offsets[c] + idx;
                return if c == b && x >= v { x + 1 } else { x };
            }
            idx -= avail;
        }
        unreachable!("neighbor index validated by the handle")
    }
    fn num_edges(&self) -> Option<usize> {
        let n = self.num_vertices();
        Some((0..n).map(|v| self.degree(v)).sum::<usize>() / 2)
    }
    fn describe(&self) -> String {
        format!("blocks(sizes={:?})", self.sizes)
    }
}

/// Oracle invocation tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub vertex: u64,
    pub degree: u64,
    pub edge: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.vertex + self.degree + self.edge
    }
}

/// Query-counted access to a fixed graph. Every oracle invocation, valid or
/// not, increments exactly one counter.
pub struct OracleHandle {
    backend: Arc<dyn GraphBackend>,
    counts: QueryCounts,
}

impl std::fmt::Debug for OracleHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleHandle")
            .field("backend", &self.backend.describe())
            .field("counts", &self.counts)
            .finish()
    }
}

impl OracleHandle {
    pub fn new(backend: Arc<dyn GraphBackend>) -> Self {
        Self {
            backend,
            counts: QueryCounts::default(),
        }
    }

    pub fn from_graph(g: StaticGraph) -> Self {
        Self::new(Arc::new(g))
    }

    /// A fresh handle (zeroed counters) over the same backend.
    pub fn fork(&self) -> Self {
        Self::new(Arc::clone(&self.backend))
    }

    /// `n` is part of the model's input and costs nothing.
    pub fn n(&self) -> usize {
        self.backend.num_vertices()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    /// Uncounted access for audits and verification; algorithms must not use it.
    pub fn backend(&self) -> &dyn GraphBackend {
        self.backend.as_ref()
    }

    pub fn describe(&self) -> String {
        self.backend.describe()
    }

    /// Vertex oracle: the `i`-th vertex, `1 <= i <= n`.
    pub fn vertex(&mut self, i: usize) -> Result<usize> {
        self.counts.vertex += 1;
        if i == 0 || i > self.n() {
            return domain(format!("vertex index {i} outside 1..={}", self.n()));
        }
        Ok(i - 1)
    }

    /// Degree oracle.
    pub fn degree(&mut self, v: usize) -> Result<usize> {
        self.counts.degree += 1;
        self.check_vertex(v)?;
        Ok(self.backend.degree(v))
    }

    /// Edge oracle: the `i`-th neighbor of `v`, `1 <= i <= d(v)`.
    pub fn neighbor(&mut self, v: usize, i: usize) -> Result<usize> {
        self.counts.edge += 1;
        self.check_vertex(v)?;
        let d = self.backend.degree(v);
        if i == 0 || i > d {
            return domain(format!("neighbor index {i} outside 1..={d} for vertex {v}"));
        }
        Ok(self.backend.neighbor(v, i - 1))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return domain(format!("unknown vertex {v} (n={})", self.n()));
        }
        Ok(())
    }

    /// Reads the whole graph through the uncounted backend.
    pub fn materialize(&self) -> StaticGraph {
        let b = self.backend();
        let n = b.num_vertices();
        let pairs = (0..n).flat_map(|v| {
            (0..b.degree(v))
                .map(move |i| (v, b.neighbor(v, i)))
                .filter(|&(v, u)| v < u)
        });
        StaticGraph::from_pairs(n, pairs.collect::<Vec<_>>())
            .expect("backend produced an invalid graph")
    }
}

/// Which backend an [`implicit_backend`] handle should use.
#[derive(Debug, Clone, PartialEq)]
pub enum BackendSpec {
    Complete {
        n: usize,
    },
    StochasticBlock {
        sizes: Vec<usize>,
        connect: Vec<Vec<bool>>,
    },
    Explicit(Arc<StaticGraph>),
}

impl BackendSpec {
    /// Parses `complete:N` or `sbm:S1,S2,..:ROW/ROW/..` (rows of 0/1 digits).
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let kind = parts.next().unwrap_or("");
        let bad = |why: &str| Error::Config(format!("bad implicit graph '{text}': {why}"));
        match kind {
            "complete" => {
                let n = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected complete:N"))?;
                Ok(Self::Complete { n })
            }
            "sbm" | "stochastic-block" => {
                let sizes: Vec<usize> = parts
                    .next()
                    .ok_or_else(|| bad("missing block sizes"))?
                    .split(',')
                    .map(|s| s.parse().map_err(|_| bad("block sizes must be integers")))
                    .collect::<Result<_>>()?;
                let connect: Vec<Vec<bool>> = parts
                    .next()
                    .ok_or_else(|| bad("missing connectivity rows"))?
                    .split('/')
                    .map(|row| {
                        row.chars()
                            .map(|c| match c {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                _ => Err(bad("connectivity rows use digits 0/1")),
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                Ok(Self::StochasticBlock { sizes, connect })
            }
            other => Err(Error::Config(format!(
                "unsupported implicit graph kind '{other}' (expected complete or sbm)"
            ))),
        }
    }
}

/// Builds a handle over an explicit graph or an arithmetic implicit generator.
///
/// Implicit generators answer degree queries without enumerating edges, which
/// is what lets dense inputs be sparsified without materializing them.
pub fn implicit_backend(spec: BackendSpec) -> Result<OracleHandle> {
    let backend: Arc<dyn GraphBackend> = match spec {
        BackendSpec::Complete { n } => {
            if n == 0 {
                return Err(Error::Config("complete graph needs n >= 1".into()));
            }
            Arc::new(CompleteBackend { n })
        }
        BackendSpec::StochasticBlock { sizes, connect } => {
            Arc::new(BlockBackend::new(sizes, connect)?)
        }
        BackendSpec::Explicit(g) => g,
    };
    Ok(OracleHandle::new(backend))
}
