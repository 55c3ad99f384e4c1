use crate::error::{domain, Error, Result};
use crate::graph::{GraphBackend, StaticGraph};
use crate::rng::{SeedSplitter, STREAM_GADGET};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Forces every `H_ij` regardless of `p` and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetOverride {
    #[default]
    None,
    AllOnes,
    AllZeros,
}

/// `H`, a `k × k` 0/1 matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMatrix {
    pub k: usize,
    bits: Vec<bool>,
}

impl HMatrix {
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                bits.push(f(i, j));
            }
        }
        Self { k, bits }
    }

    pub fn random<R: Rng + ?Sized>(k: usize, p: f64, rng: &mut R) -> Self {
        Self::from_fn(k, |_, _| rng.random_bool(p))
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.k + j]
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn rows(&self) -> Vec<String> {
        self.bits
            .chunks(self.k.max(1))
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }
}

/// Vertex `it` (block `t ∈ 1..=4`, index `i`) has id `(t-1) k + i`.
pub fn gadget_vertex(k: usize, block: usize, i: usize) -> usize {
    (block - 1) * k + i
}

/// Oracle view of `G_{k,p}` (optionally with a clique inside each block).
///
/// Neighbor lists are ordered so the `j`-th gadget neighbor of a vertex is
/// decided by a single `H` entry, so each edge-oracle answer reveals at most
/// one `H_ij`. Clique neighbors, when present, follow the gadget ones.
#[derive(Debug, Clone)]
pub struct GadgetBackend {
    h: HMatrix,
    cliques: bool,
}

impl GadgetBackend {
    pub fn new(h: HMatrix, cliques: bool) -> Self {
        Self { h, cliques }
    }

    pub fn matrix(&self) -> &HMatrix {
        &self.h
    }
}

impl GraphBackend for GadgetBackend {
    fn num_vertices(&self) -> usize {
        4 * self.h.k
    }
    fn degree(&self, _v: usize) -> usize {
        let k = self.h.k;
        if self.cliques {
            2 * k - 1
        } else {
            k
        }
    }
    fn neighbor(&self, v: usize, idx: usize) -> usize {
        let k = self.h.k;
        let (block, i) = (v / k + 1, v % k);
        if idx >= k {
            // clique part: the other k-1 members of the block in order
            let j = idx - k;
            let j = if j >= i { j + 1 } else { j };
            return gadget_vertex(k, block, j);
        }
        let j = idx;
        match block {
            // i1: H_ij=1 -> j2, else j3
            1 => gadget_vertex(k, if self.h.get(i, j) { 2 } else { 3 }, j),
            // i2 (as the j of row j): H_ji=1 -> j1, else j4
            2 => gadget_vertex(k, if self.h.get(j, i) { 1 } else { 4 }, j),
            // i3: H_ji=1 -> j4, else j1
            3 => gadget_vertex(k, if self.h.get(j, i) { 4 } else { 1 }, j),
            // i4: H_ij=1 -> j3, else j2
            _ => gadget_vertex(k, if self.h.get(i, j) { 3 } else { 2 }, j),
        }
    }
    fn num_edges(&self) -> Option<usize> {
        let k = self.h.k;
        Some(2 * k * k + if self.cliques { 4 * k * (k - 1) / 2 } else { 0 })
    }
    fn describe(&self) -> String {
        format!("gadget(k={}, cliques={})", self.h.k, self.cliques)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetGkp {
    pub k: usize,
    pub p: f64,
    pub h: HMatrix,
    pub graph: StaticGraph,
    /// The planted cut `S = V¹ ∪ V³`.
    pub s: Vec<usize>,
    pub seed: u64,
}

/// Sidecar record written next to a gadget's edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetSidecar {
    pub k: usize,
    pub p: f64,
    pub seed: u64,
    pub overridden: GadgetOverride,
    /// Half-open vertex ranges of `V¹..V⁴`.
    pub blocks: Vec<(usize, usize)>,
    pub s: Vec<usize>,
    pub h: Vec<String>,
    pub h_ones: usize,
    pub cut_s: f64,
}

/// Edges of `G_{k,p}` for a given `H`.
pub fn gadget_edges(h: &HMatrix) -> Vec<(usize, usize)> {
    let k = h.k;
    let mut edges = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            if h.get(i, j) {
                edges.push((gadget_vertex(k, 1, i), gadget_vertex(k, 2, j)));
                edges.push((gadget_vertex(k, 3, j), gadget_vertex(k, 4, i)));
            } else {
                edges.push((gadget_vertex(k, 1, i), gadget_vertex(k, 3, j)));
                edges.push((gadget_vertex(k, 2, j), gadget_vertex(k, 4, i)));
            }
        }
    }
    edges
}

pub fn planted_cut(k: usize) -> Vec<usize> {
    (0..k).chain(2 * k..3 * k).collect()
}

pub(crate) fn check_gadget_params(k: usize, p: f64) -> Result<()> {
    if k <= 3 {
        return domain(format!("gadget block size must exceed 3, got k={k}"));
    }
    if !(p > 0.0 && p <= 0.25) {
        return domain(format!("gadget needs 0 < p <= 1/4, got p={p}"));
    }
    Ok(())
}

/// Draws `H` from the seed's gadget stream and builds `G_{k,p}`.
pub fn build_gkp(k: usize, p: f64, seed: u64, force: GadgetOverride) -> Result<GadgetGkp> {
    if force == GadgetOverride::None {
        check_gadget_params(k, p)?;
    } else if k <= 3 {
        return domain(format!("gadget block size must exceed 3, got k={k}"));
    }
    let h = match force {
        GadgetOverride::None => {
            HMatrix::random(k, p, &mut SeedSplitter::new(seed).stream(STREAM_GADGET))
        }
        GadgetOverride::AllOnes => HMatrix::from_fn(k, |_, _| true),
        GadgetOverride::AllZeros => HMatrix::from_fn(k, |_, _| false),
    };
    Ok(gadget_from_matrix(h, p, seed))
}

pub fn gadget_from_matrix(h: HMatrix, p: f64, seed: u64) -> GadgetGkp {
    let k = h.k;
    let graph = StaticGraph::from_pairs(4 * k, gadget_edges(&h)).expect("gadget edges are valid");
    GadgetGkp {
        k,
        p,
        h,
        graph,
        s: planted_cut(k),
        seed,
    }
}

impl GadgetGkp {
    pub fn cut_s(&self) -> f64 {
        self.graph
            .cut_value_of(&self.s)
            .expect("planted cut in range")
    }

    pub fn sidecar(&self, overridden: GadgetOverride) -> GadgetSidecar {
        let k = self.k;
        GadgetSidecar {
            k,
            p: self.p,
            seed: self.seed,
            overridden,
            blocks: (0..4).map(|t| (t * k, (t + 1) * k)).collect(),
            s: self.s.clone(),
            h: self.h.rows(),
            h_ones: self.h.ones(),
            cut_s: self.cut_s(),
        }
    }

    /// Checks every structural invariant; the error names the first failure.
    pub fn verify(&self) -> Result<()> {
        let k = self.k;
        let g = &self.graph;
        let fail = |msg: String| Err(Error::Construction(msg));
        if g.n() != 4 * k {
            return fail(format!("expected {} vertices, found {}", 4 * k, g.n()));
        }
        if g.num_edges() != 2 * k * k {
            return fail(format!(
                "expected {} edges, found {}",
                2 * k * k,
                g.num_edges()
            ));
        }
        if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != k) {
            return fail(format!(
                "vertex {v} has degree {} instead of {k}",
                g.degree(v)
            ));
        }
        for i in 0..k {
            for j in 0..k {
                let (a, b, c, d) = if self.h.get(i, j) {
                    ((1, i), (2, j), (3, j), (4, i))
                } else {
                    ((1, i), (3, j), (2, j), (4, i))
                };
                let present = g
                    .weight(gadget_vertex(k, a.0, a.1), gadget_vertex(k, b.0, b.1))
                    .is_some()
                    && g.weight(gadget_vertex(k, c.0, c.1), gadget_vertex(k, d.0, d.1))
                        .is_some();
                if !present {
                    return fail(format!(
                        "edges for H[{i}][{j}]={} missing",
                        u8::from(self.h.get(i, j))
                    ));
                }
            }
        }
        let expected = 2.0 * self.h.ones() as f64;
        if self.cut_s() != expected {
            return fail(format!("Cut(S) = {} but 2·ΣH = {expected}", self.cut_s()));
        }
        Ok(())
    }
}
