//! Cut problems driven through the sparsifier, with exact small-instance
//! oracles (exhaustive sparsest cut, exact max flow).

mod flow;
mod sparsest;

pub use flow::{max_flow_exact, min_st_cut_approx, MaxFlow, MinCutConfig};
pub use sparsest::{
    brute_force_sparsest_cut, sparsest_cut_driver, sweep_cut, CutSubroutine, SparsestCutConfig,
    BRUTE_FORCE_LIMIT,
};

use crate::graph::{GraphBackend, QueryCounts};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub set: Vec<usize>,
    /// `Cut_G(U)`, recomputed on the input graph.
    pub value: f64,
    /// `Cut_H̄(U)` in the sparsifier the cut was found on.
    pub sparsifier_value: f64,
    /// `Cut_G(U)/|U|` for sparsest cut.
    pub ratio: Option<f64>,
    pub sparsifier_ratio: Option<f64>,
    pub iterations: usize,
    /// Whether the exit condition (`δ <= OPT̄/2α` for sparsest cut) held.
    pub certified: bool,
    pub delta_schedule: Vec<f64>,
    pub retries: usize,
    pub queries: QueryCounts,
    pub details: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

/// `Cut_G(U)` through raw backend access, which is not counted as queries.
pub fn cut_in_backend(g: &dyn GraphBackend, in_set: &[bool]) -> f64 {
    let mut crossing = 0usize;
    for (u, _) in in_set.iter().enumerate().filter(|(_, &b)| b) {
        for i in 0..g.degree(u) {
            if !in_set[g.neighbor(u, i)] {
                crossing += 1;
            }
        }
    }
    crossing as f64
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}
