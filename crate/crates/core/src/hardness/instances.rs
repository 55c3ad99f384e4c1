use super::gadget::{
    build_gkp, gadget_edges, gadget_vertex, planted_cut, GadgetBackend, GadgetOverride, HMatrix,
};
use crate::error::{domain, Result};
use crate::graph::{OracleHandle, StaticGraph};
use crate::rng::{SeedSplitter, STREAM_EXPERIMENT, STREAM_GADGET};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem7Case {
    /// `δ < ε²`: blocks of `10/δ`, `p = δ²`.
    Delta,
    /// `δ ≥ ε²`: blocks of `10/ε²`, `p = ε²`.
    Epsilon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem7Instance {
    pub case: Theorem7Case,
    pub k: usize,
    pub p: f64,
    pub copies: usize,
    pub graph: StaticGraph,
    /// Planted cut of each copy, in the union's vertex ids.
    pub cuts: Vec<Vec<usize>>,
    pub cut_values: Vec<f64>,
}

fn round_block(raw: f64) -> usize {
    (((raw / 4.0).round() as usize) * 4).max(4)
}

/// Disjoint union of independent gadgets sized so the total vertex count lies
/// in `[n, 2n]`.
pub fn build_theorem7_instance(
    n: usize,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<Theorem7Instance> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return domain(format!(
            "need epsilon, delta in (0,1), got epsilon={epsilon}, delta={delta}"
        ));
    }
    let (case, k, p) = if delta < epsilon * epsilon {
        (
            Theorem7Case::Delta,
            round_block(10.0 / delta),
            delta * delta,
        )
    } else {
        (
            Theorem7Case::Epsilon,
            round_block(10.0 / (epsilon * epsilon)),
            epsilon * epsilon,
        )
    };
    if p > 0.25 {
        return domain(format!(
            "{case:?} case gives p={p} > 1/4; use delta <= 0.5 (delta < epsilon²) or epsilon <= 0.5 (delta >= epsilon²)"
        ));
    }
    let copies = n.div_ceil(4 * k).max(1);
    if 4 * k * copies > 2 * n.max(1) {
        return domain(format!(
            "one gadget has {} vertices, more than 2n = {}; use n >= {}",
            4 * k,
            2 * n,
            2 * k
        ));
    }
    let splitter = SeedSplitter::new(seed);
    let mut edges = Vec::with_capacity(2 * k * k * copies);
    let mut cuts = Vec::with_capacity(copies);
    let mut cut_values = Vec::with_capacity(copies);
    for c in 0..copies {
        let g = build_gkp(
            k,
            p,
            splitter.substream_seed(STREAM_GADGET, c as u64),
            GadgetOverride::None,
        )?;
        let offset = 4 * k * c;
        edges.extend(
            gadget_edges(&g.h)
                .into_iter()
                .map(|(u, v)| (u + offset, v + offset)),
        );
        cuts.push(g.s.iter().map(|v| v + offset).collect());
        cut_values.push(g.cut_s());
    }
    let graph = StaticGraph::from_pairs(4 * k * copies, edges)?;
    Ok(Theorem7Instance {
        case,
        k,
        p,
        copies,
        graph,
        cuts,
        cut_values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem8Instance {
    pub k: usize,
    pub epsilon: f64,
    /// `ε/k`
    pub p: f64,
    pub density: f64,
    pub h: HMatrix,
    pub graph: StaticGraph,
    pub s: Vec<usize>,
    /// `Cut(S)/|S| = ΣH/k`
    pub planted_ratio: f64,
}

fn check_theorem8(k: usize, epsilon: f64) -> Result<f64> {
    if k <= 3 {
        return domain(format!("block size must exceed 3, got k={k}"));
    }
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    let p = epsilon / k as f64;
    if !(epsilon * k as f64 > 1.0) || p > 0.25 {
        return domain(format!(
            "need 1/k < epsilon <= k/4 (or epsilon = 0), got epsilon={epsilon} with k={k}"
        ));
    }
    Ok(p)
}

fn theorem8_matrix(k: usize, p: f64, seed: u64) -> HMatrix {
    if p == 0.0 {
        HMatrix::from_fn(k, |_, _| false)
    } else {
        HMatrix::random(k, p, &mut SeedSplitter::new(seed).stream(STREAM_GADGET))
    }
}

/// `G_{k, ε/k}` with a clique (kept edge-wise with probability `density`)
/// inside each block; `ε = 0` gives the disconnected control.
pub fn build_theorem8_instance(
    k: usize,
    epsilon: f64,
    seed: u64,
    density: f64,
) -> Result<Theorem8Instance> {
    let p = check_theorem8(k, epsilon)?;
    if !(density > 0.0 && density <= 1.0) {
        return domain(format!("clique density must lie in (0,1], got {density}"));
    }
    let h = theorem8_matrix(k, p, seed);
    let mut edges = gadget_edges(&h);
    let mut rng = SeedSplitter::new(seed).stream(STREAM_EXPERIMENT);
    for block in 1..=4 {
        for i in 0..k {
            for j in i + 1..k {
                if density >= 1.0 || rng.random_bool(density) {
                    edges.push((gadget_vertex(k, block, i), gadget_vertex(k, block, j)));
                }
            }
        }
    }
    let graph = StaticGraph::from_pairs(4 * k, edges)?;
    let planted_ratio = h.ones() as f64 / k as f64;
    Ok(Theorem8Instance {
        k,
        epsilon,
        p,
        density,
        h,
        graph,
        s: planted_cut(k),
        planted_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishPoint {
    pub epsilon: f64,
    /// Probes needed per trial; `None` when the cap was hit first.
    pub probes: Vec<Option<u64>>,
    pub median: f64,
    pub censored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub k: usize,
    pub trials: usize,
    pub probe_cap: u64,
    pub points: Vec<DistinguishPoint>,
    /// Least-squares slope of `ln median` against `ln ε` over points with `ε > 0`.
    pub slope: Option<f64>,
    pub pass: bool,
}

pub const SLOPE_TOLERANCE: f64 = 0.2;

fn probe_until_crossing(k: usize, p: f64, seed: u64, cap: u64) -> Result<Option<u64>> {
    let mut rng = SeedSplitter::new(seed).stream(STREAM_EXPERIMENT);
    let h = theorem8_matrix(k, p, SeedSplitter::new(seed).stream_seed(STREAM_GADGET));
    let mut oracle = OracleHandle::new(Arc::new(GadgetBackend::new(h, true)));
    let n = 4 * k;
    for probe in 1..=cap {
        let v = oracle.vertex(rng.random_range(1..=n))?;
        let d = oracle.degree(v)?;
        let w = oracle.neighbor(v, rng.random_range(1..=d))?;
        // S = V¹ ∪ V³ is the set of vertices with even block index (0-based)
        if (v / k) % 2 != (w / k) % 2 {
            return Ok(Some(probe));
        }
    }
    Ok(None)
}

fn median(mut probes: Vec<Option<u64>>, cap: u64) -> f64 {
    probes.sort_by_key(|p| p.unwrap_or(cap + 1));
    let at = |i: usize| probes[i].map_or(cap as f64, |v| v as f64);
    let m = probes.len();
    if m % 2 == 1 {
        at(m / 2)
    } else {
        0.5 * (at(m / 2 - 1) + at(m / 2))
    }
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Counts random edge probes (uniform vertex, then uniform incident edge)
/// until one crosses the planted cut of a fresh clique-augmented gadget, for each ε.
pub fn distinguishing_query_experiment(
    k: usize,
    epsilons: &[f64],
    trials: usize,
    seed: u64,
    probe_cap: u64,
) -> Result<DistinguishReport> {
    if trials == 0 || probe_cap == 0 {
        return domain("need at least one trial and a positive probe cap");
    }
    let splitter = SeedSplitter::new(seed);
    let mut points = Vec::with_capacity(epsilons.len());
    for (e, &epsilon) in epsilons.iter().enumerate() {
        let p = check_theorem8(k, epsilon)?;
        let child = splitter.child(STREAM_EXPERIMENT, e as u64);
        let probes = (0..trials)
            .into_par_iter()
            .map(|t| {
                probe_until_crossing(
                    k,
                    p,
                    child.substream_seed(STREAM_EXPERIMENT, t as u64),
                    probe_cap,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let censored = probes.iter().filter(|p| p.is_none()).count();
        points.push(DistinguishPoint {
            epsilon,
            median: median(probes.clone(), probe_cap),
            probes,
            censored,
        });
    }
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.epsilon > 0.0 && 2 * p.censored < trials)
        .map(|p| (p.epsilon, p.median))
        .collect();
    let slope = loglog_slope(&fit);
    let pass = fit.len() >= 2 && slope.is_some_and(|s| (s + 1.0).abs() <= SLOPE_TOLERANCE);
    Ok(DistinguishReport {
        k,
        trials,
        probe_cap,
        points,
        slope,
        pass,
    })
}
