//! The sublinear sparsification pipeline.
//!
//! 1. build a constant-degree expander on `⌈δn⌉` vertices,
//! 2. place it on a uniformly random vertex subset `V_δ`,
//! 3. sample `q = C₀ ⌈n ln²n / (δ ε²)⌉` edges of the union with
//!    `p(u,v) = 1/(n d(u)) + 1/(n d(v))`, reweighting each by `1/(q p)`,
//! 4. optionally resparsify by effective-resistance sampling.
//!
//! Only steps 2 and 3 touch the input graph, and only through its oracles.

mod resparsify;
mod sampling;

pub use resparsify::{
    resparsify, sketched_resistances, target_edges, ResistanceMethod, ResparsifyConfig,
    ResparsifyOutcome,
};
pub use sampling::{draw_edge, edge_probability, pick_v_delta, sample_edge, sparsify, EdgeDraw};

use crate::error::{Error, Result};
use crate::expander::{build_expander_with, ExpanderConfig, ExpanderGraph, ExpanderMode};
use crate::graph::{overlay_union, OracleHandle, QueryCounts, StaticGraph};
use crate::rng::{SeedSplitter, STREAM_EDGES, STREAM_EXPANDER, STREAM_RESPARSIFY, STREAM_VDELTA};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsifyConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// `C₀` in `q = C₀ ⌈n ln²n / (δ ε²)⌉`.
    pub q_multiplier: f64,
    pub seed: u64,
    pub expander_mode: ExpanderMode,
    pub expander: ExpanderConfig,
    pub resparsify: bool,
    pub resparsify_config: ResparsifyConfig,
    /// Denominator used when weights are rounded to integers downstream.
    pub round_denominator: u64,
}

pub const DEFAULT_Q_MULTIPLIER: f64 = 0.1;

impl SparsifyConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        Self {
            epsilon,
            delta,
            q_multiplier: DEFAULT_Q_MULTIPLIER,
            seed,
            expander_mode: ExpanderMode::default(),
            expander: ExpanderConfig::default(),
            resparsify: true,
            resparsify_config: ResparsifyConfig::default(),
            round_denominator: 1000,
        }
    }

    /// Checks `ε ∈ (0,1)`, `0 < δ <= 1/ln n` and `C₀ > 0`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Precondition(format!(
                "epsilon must lie in (0,1), got {}",
                self.epsilon
            )));
        }
        let cap = max_delta(n);
        if !(self.delta > 0.0) || self.delta > cap {
            return Err(Error::Precondition(format!(
                "delta must satisfy 0 < delta <= 1/ln n = {cap:.6} for n={n}, got {}",
                self.delta
            )));
        }
        if !(self.q_multiplier > 0.0 && self.q_multiplier.is_finite()) {
            return Err(Error::Config(format!(
                "q multiplier must be positive, got {}",
                self.q_multiplier
            )));
        }
        if self.round_denominator == 0 {
            return Err(Error::Config("round denominator must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of edge samples `q`.
    pub fn sample_count(&self, n: usize) -> u64 {
        let ln = (n.max(2) as f64).ln();
        let base = (n as f64 * ln * ln / (self.delta * self.epsilon * self.epsilon)).ceil();
        ((self.q_multiplier * base).ceil() as u64).max(1)
    }

    /// Requested expander size `max(2, ⌈δn⌉)`.
    pub fn expander_target(&self, n: usize) -> usize {
        ((self.delta * n as f64).ceil() as usize).max(2)
    }
}

/// Largest admissible `δ`, i.e. `1/ln n`.
pub fn max_delta(n: usize) -> f64 {
    if n <= 1 {
        f64::INFINITY
    } else {
        1.0 / (n as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifierOutput {
    /// `H̄`.
    pub graph: StaticGraph,
    /// Distinct edges of `H` before resparsification.
    pub intermediate_edges: usize,
    pub samples: u64,
    pub query_report: QueryCounts,
    pub v_delta: Vec<usize>,
    pub expander_size: usize,
    pub expander_lambda2: f64,
    pub seed_trace: BTreeMap<String, u64>,
    pub resparsify_applied: bool,
    pub resparsify_method: ResistanceMethod,
    pub resparsify_target: usize,
    pub warnings: Vec<String>,
    /// `|E(H̄)| / (n ln n / ε²)`.
    pub edge_constant: f64,
}

/// Machine-readable summary of a run (everything except `H̄` itself).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyReport {
    pub config: SparsifyConfig,
    pub n: usize,
    pub input: String,
    pub input_edges: Option<usize>,
    pub samples: u64,
    pub intermediate_edges: usize,
    pub output_edges: usize,
    pub edge_constant: f64,
    pub queries: QueryCounts,
    pub query_total: u64,
    pub expander_size: usize,
    pub expander_lambda2: f64,
    pub v_delta: Vec<usize>,
    pub seed_trace: BTreeMap<String, u64>,
    pub resparsify_applied: bool,
    pub resparsify_method: ResistanceMethod,
    pub resparsify_target: usize,
    pub warnings: Vec<String>,
}

impl SparsifierOutput {
    pub fn report(&self, cfg: &SparsifyConfig, h: &OracleHandle) -> SparsifyReport {
        SparsifyReport {
            config: *cfg,
            n: h.n(),
            input: h.describe(),
            input_edges: h.backend().num_edges(),
            samples: self.samples,
            intermediate_edges: self.intermediate_edges,
            output_edges: self.graph.num_edges(),
            edge_constant: self.edge_constant,
            queries: self.query_report,
            query_total: self.query_report.total(),
            expander_size: self.expander_size,
            expander_lambda2: self.expander_lambda2,
            v_delta: self.v_delta.clone(),
            seed_trace: self.seed_trace.clone(),
            resparsify_applied: self.resparsify_applied,
            resparsify_method: self.resparsify_method,
            resparsify_target: self.resparsify_target,
            warnings: self.warnings.clone(),
        }
    }
}

fn place_expander(
    h: &mut OracleHandle,
    cfg: &SparsifyConfig,
) -> Result<(ExpanderGraph, Vec<usize>)> {
    let n = h.n();
    let seeds = SeedSplitter::new(cfg.seed);
    let expander = build_expander_with(
        cfg.expander_target(n),
        cfg.expander_mode,
        &cfg.expander,
        &mut seeds.stream(STREAM_EXPANDER),
    )?;
    if expander.actual_size > n {
        return Err(Error::Domain(format!(
            "expander has {} vertices but the graph only {n}; lower delta or use random-regular mode",
            expander.actual_size
        )));
    }
    let v_delta = pick_v_delta(h, expander.actual_size, &mut seeds.stream(STREAM_VDELTA))?;
    Ok((expander, v_delta))
}

/// `G̃` with the expander and `V_δ` that a run with `cfg` would use, read
/// through the uncounted backend.
pub fn overlay_graph(h: &mut OracleHandle, cfg: &SparsifyConfig) -> Result<StaticGraph> {
    let n = h.n();
    cfg.validate(n)?;
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 vertices, got {n}")));
    }
    let (expander, v_delta) = place_expander(h, cfg)?;
    Ok(overlay_union(h, expander.graph, &v_delta)?.materialize())
}

/// Runs the full pipeline against `h`. The query report covers this run
/// only (counter deltas), so a handle may be reused across runs.
pub fn sublinear_sparsify(h: &mut OracleHandle, cfg: &SparsifyConfig) -> Result<SparsifierOutput> {
    let n = h.n();
    cfg.validate(n)?;
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 vertices, got {n}")));
    }
    let before = h.counts();
    let seeds = SeedSplitter::new(cfg.seed);
    let mut seed_trace = BTreeMap::new();
    for name in [
        STREAM_EXPANDER,
        STREAM_VDELTA,
        STREAM_EDGES,
        STREAM_RESPARSIFY,
    ] {
        seed_trace.insert(name.to_string(), seeds.stream_seed(name));
    }

    let (expander, v_delta) = place_expander(h, cfg)?;
    let expander_size = expander.actual_size;
    let expander_lambda2 = expander.lambda2;

    let q = cfg.sample_count(n);
    let intermediate = {
        let mut tg = overlay_union(h, expander.graph, &v_delta)?;
        let mut rng = seeds.stream(STREAM_EDGES);
        // a draw landing on an isolated vertex is an empty sample, which keeps
        // the estimator unbiased without knowing how many vertices are isolated
        sparsify(n, q, || match draw_edge(&mut tg, &mut rng)? {
            EdgeDraw::Edge { u, v, p } => Ok(Some((u, v, p))),
            EdgeDraw::Isolated(_) => Ok(None),
        })?
    };
    let after = h.counts();
    let query_report = QueryCounts {
        vertex: after.vertex - before.vertex,
        degree: after.degree - before.degree,
        edge: after.edge - before.edge,
    };

    let intermediate_edges = intermediate.num_edges();
    let mut warnings = Vec::new();
    let (graph, applied, method, target) = if cfg.resparsify {
        let out = resparsify(
            &intermediate,
            cfg.epsilon,
            &cfg.resparsify_config,
            &mut seeds.stream(STREAM_RESPARSIFY),
        )?;
        warnings.extend(out.warning);
        (out.graph, out.applied, out.method, out.target_edges)
    } else {
        (intermediate, false, ResistanceMethod::None, 0)
    };
    let nf = n as f64;
    let edge_constant = graph.num_edges() as f64 / (nf * nf.ln() / (cfg.epsilon * cfg.epsilon));
    Ok(SparsifierOutput {
        graph,
        intermediate_edges,
        samples: q,
        query_report,
        v_delta,
        expander_size,
        expander_lambda2,
        seed_trace,
        resparsify_applied: applied,
        resparsify_method: method,
        resparsify_target: target,
        warnings,
        edge_constant,
    })
}
