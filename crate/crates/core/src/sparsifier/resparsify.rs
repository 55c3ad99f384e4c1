//! Second-stage sparsification of an already sparse weighted graph by
//! effective-resistance importance sampling.
//!
//! Resistances are exact (dense pseudoinverse) up to `dense_limit` vertices and
//! estimated with a random-projection sketch plus conjugate-gradient solves
//! above it. No input-graph oracle is touched here.

use crate::error::Result;
use crate::graph::StaticGraph;
use crate::linalg::{laplacian_pseudoinverse, laplacian_solve_cg, DEFAULT_EIG_BUDGET};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResparsifyConfig {
    /// `C₁` in the target edge count `C₁ n ln n / ε²`.
    pub edge_constant: f64,
    pub dense_limit: usize,
    /// Sketch rows per `ln n` when resistances are estimated.
    pub sketch_rows_per_log: f64,
    pub cg_tolerance: f64,
}

impl Default for ResparsifyConfig {
    fn default() -> Self {
        Self {
            edge_constant: 8.0,
            dense_limit: DEFAULT_EIG_BUDGET,
            sketch_rows_per_log: 8.0,
            cg_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResistanceMethod {
    None,
    Dense,
    Sketch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResparsifyOutcome {
    pub graph: StaticGraph,
    pub applied: bool,
    pub target_edges: usize,
    pub method: ResistanceMethod,
    pub warning: Option<String>,
}

/// Target edge count `⌊C₁ n ln n / ε²⌋` (at least 1).
pub fn target_edges(n: usize, epsilon: f64, edge_constant: f64) -> usize {
    let n_f = n.max(2) as f64;
    ((edge_constant * n_f * n_f.ln() / (epsilon * epsilon)).floor() as usize).max(1)
}

pub fn resparsify<R: Rng + ?Sized>(
    h: &StaticGraph,
    epsilon: f64,
    cfg: &ResparsifyConfig,
    rng: &mut R,
) -> Result<ResparsifyOutcome> {
    let target = target_edges(h.n(), epsilon, cfg.edge_constant);
    let unchanged = |warning: Option<String>| ResparsifyOutcome {
        graph: h.clone(),
        applied: false,
        target_edges: target,
        method: ResistanceMethod::None,
        warning,
    };
    if h.num_edges() <= target {
        return Ok(unchanged(None));
    }
    if !h.is_connected() {
        return Ok(unchanged(Some(
            "input is disconnected; resparsification skipped".into(),
        )));
    }
    let edges: Vec<_> = h.edges().collect();
    let (resistances, method) = if h.n() <= cfg.dense_limit {
        let pinv = laplacian_pseudoinverse(h)?;
        let r = edges
            .iter()
            .map(|e| pinv[(e.u, e.u)] + pinv[(e.v, e.v)] - 2.0 * pinv[(e.u, e.v)])
            .collect();
        (r, ResistanceMethod::Dense)
    } else {
        (sketched_resistances(h, cfg, rng)?, ResistanceMethod::Sketch)
    };
    // leverage scores w_e R_e; the floor keeps every edge samplable
    let scores: Vec<f64> = edges
        .iter()
        .zip(&resistances)
        .map(|(e, &r)| (e.w * r).max(1e-12))
        .collect();
    let total: f64 = scores.iter().sum();
    let mut cumulative = Vec::with_capacity(scores.len());
    let mut acc = 0.0;
    for s in &scores {
        acc += s;
        cumulative.push(acc);
    }
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for _ in 0..target {
        let x = rng.random::<f64>() * acc;
        let i = cumulative
            .partition_point(|&c| c <= x)
            .min(scores.len() - 1);
        *counts.entry(i).or_default() += 1;
    }
    let mut picked: Vec<(usize, u64)> = counts.into_iter().collect();
    picked.sort_unstable();
    let q = target as f64;
    let graph = StaticGraph::from_weighted_edges(
        h.n(),
        picked.into_iter().map(|(i, c)| {
            let e = edges[i];
            let p = scores[i] / total;
            (e.u, e.v, c as f64 * e.w / (q * p))
        }),
    )?;
    Ok(ResparsifyOutcome {
        graph,
        applied: true,
        target_edges: target,
        method,
        warning: None,
    })
}

/// `R(u,v) ≈ ‖Z (e_u - e_v)‖²` with `Z = Q W^{1/2} B L⁺`, `Q` a random ±1/√k matrix.
pub fn sketched_resistances<R: Rng + ?Sized>(
    h: &StaticGraph,
    cfg: &ResparsifyConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = h.n();
    let k = ((cfg.sketch_rows_per_log * (n as f64).ln()).ceil() as usize).max(1);
    let scale = 1.0 / (k as f64).sqrt();
    let edges: Vec<_> = h.edges().collect();
    let mut est = vec![0.0; edges.len()];
    let mut rhs = vec![0.0; n];
    for _ in 0..k {
        rhs.iter_mut().for_each(|x| *x = 0.0);
        for e in &edges {
            let s = if rng.random_bool(0.5) { scale } else { -scale } * e.w.sqrt();
            rhs[e.u] += s;
            rhs[e.v] -= s;
        }
        let z = laplacian_solve_cg(h, &rhs, cfg.cg_tolerance, 20 * n + 1000)?;
        for (r, e) in est.iter_mut().zip(&edges) {
            let d = z[e.u] - z[e.v];
            *r += d * d;
        }
    }
    Ok(est)
}
