//! Bounded-degree expanders with a numerically certified spectral gap.
//!
//! Two constructions: random `d`-regular graphs (configuration model repaired
//! by edge switches, accepted only if the second eigenvalue of the normalized
//! adjacency is small enough) and the deterministic Margulis–Gabber–Galil
//! graph on a torus.

use crate::error::{Error, Result};
use crate::graph::generators::complete;
use crate::graph::StaticGraph;
use crate::linalg::{lanczos_extremes, symmetric_eigenvalues};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ExpanderMode {
    #[default]
    RandomRegular,
    Margulis,
}

impl std::str::FromStr for ExpanderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-regular" => Ok(Self::RandomRegular),
            "margulis" => Ok(Self::Margulis),
            other => Err(Error::Config(format!("unknown expander mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpanderConfig {
    pub degree: usize,
    pub gap_threshold: f64,
    pub max_retries: usize,
}

impl Default for ExpanderConfig {
    fn default() -> Self {
        Self {
            degree: 8,
            gap_threshold: 0.9,
            max_retries: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpanderGraph {
    pub graph: StaticGraph,
    pub degree_bound: usize,
    pub target_size: usize,
    pub actual_size: usize,
    pub lambda2: f64,
    pub attempts: usize,
}

/// Second normalized-adjacency eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    /// `|λ₂|` of `D^{-1/2} A D^{-1/2}`, eigenvalues sorted descending; 1 when disconnected.
    pub lambda2: f64,
    pub connected: bool,
}

const DENSE_GAP_LIMIT: usize = 256;

/// `|λ₂(D^{-1/2} A D^{-1/2})|`, where `λ₂` is the second largest eigenvalue.
///
/// Dense for small graphs, Lanczos (deflating the top eigenvector
/// `D^{1/2} 1`) otherwise. A disconnected graph reports exactly 1.
pub fn spectral_gap(g: &StaticGraph) -> SpectralGap {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return SpectralGap {
            lambda2: 1.0,
            connected: n == 1,
        };
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / g.weighted_degree(v).sqrt()).collect();
    let lambda2 = if n <= DENSE_GAP_LIMIT {
        let mut m = DMatrix::zeros(n, n);
        for e in g.edges() {
            let x = e.w * inv_sqrt[e.u] * inv_sqrt[e.v];
            m[(e.u, e.v)] = x;
            m[(e.v, e.u)] = x;
        }
        let ev = symmetric_eigenvalues(m);
        ev[n - 2]
    } else {
        let top: Vec<f64> = (0..n).map(|v| g.weighted_degree(v).sqrt()).collect();
        let apply = |x: &[f64], y: &mut [f64]| {
            for (v, yv) in y.iter_mut().enumerate() {
                *yv = g
                    .neighbors(v)
                    .iter()
                    .map(|&(u, w)| w * inv_sqrt[v] * inv_sqrt[u] * x[u])
                    .sum();
            }
        };
        lanczos_extremes(n, apply, &[top], 160, 0x0067_6170).1
    };
    SpectralGap {
        lambda2: lambda2.abs(),
        connected: true,
    }
}

/// Builds an expander on roughly `s` vertices (`s <= actual_size <= 2s`).
pub fn build_expander<R: Rng + ?Sized>(
    s: usize,
    mode: ExpanderMode,
    rng: &mut R,
) -> Result<ExpanderGraph> {
    build_expander_with(s, mode, &ExpanderConfig::default(), rng)
}

pub fn build_expander_with<R: Rng + ?Sized>(
    s: usize,
    mode: ExpanderMode,
    cfg: &ExpanderConfig,
    rng: &mut R,
) -> Result<ExpanderGraph> {
    if s < 2 {
        return Err(Error::Domain(format!(
            "expander size must be >= 2, got {s}"
        )));
    }
    if cfg.degree < 4 || cfg.degree % 2 == 1 {
        return Err(Error::Config(format!(
            "expander degree must be even and >= 4, got {}",
            cfg.degree
        )));
    }
    let accept = |g: StaticGraph,
                  attempts: usize,
                  bound: usize|
     -> std::result::Result<ExpanderGraph, f64> {
        let gap = spectral_gap(&g);
        // K_2 is the degenerate base case: bipartite, but trivially an expander.
        let ok = gap.connected && (g.n() <= 2 || gap.lambda2 <= cfg.gap_threshold);
        if ok {
            Ok(ExpanderGraph {
                actual_size: g.n(),
                graph: g,
                degree_bound: bound,
                target_size: s,
                lambda2: gap.lambda2,
                attempts,
            })
        } else {
            Err(gap.lambda2)
        }
    };
    match mode {
        ExpanderMode::RandomRegular => {
            if s <= cfg.degree + 1 {
                return accept(complete(s), 1, cfg.degree).map_err(|l| {
                    Error::Construction(format!("complete graph K_{s} rejected (lambda2={l})"))
                });
            }
            let mut best = f64::INFINITY;
            for attempt in 1..=cfg.max_retries.max(1) {
                let Some(pairs) = random_regular_pairs(s, cfg.degree, rng) else {
                    continue;
                };
                let g = StaticGraph::from_pairs(s, pairs)?;
                match accept(g, attempt, cfg.degree) {
                    Ok(e) => return Ok(e),
                    Err(l) => best = best.min(l),
                }
            }
            Err(Error::Construction(format!(
                "no random {}-regular graph on {s} vertices met lambda2 <= {} in {} attempts (best {best})",
                cfg.degree, cfg.gap_threshold, cfg.max_retries
            )))
        }
        ExpanderMode::Margulis => {
            let g = margulis(s);
            accept(g, 1, 8).map_err(|l| {
                Error::Construction(format!(
                    "Margulis graph for s={s} has lambda2={l} > {}",
                    cfg.gap_threshold
                ))
            })
        }
    }
}

/// Configuration-model pairing of `d` stubs per vertex, repaired into a
/// simple graph by random switches. `None` if repair stalls.
fn random_regular_pairs<R: Rng + ?Sized>(
    s: usize,
    d: usize,
    rng: &mut R,
) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..s * d).map(|i| i / d).collect();
    stubs.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for &e in &edges {
        *count.entry(e).or_default() += 1;
    }
    let bad =
        |e: (usize, usize), count: &HashMap<(usize, usize), usize>| e.0 == e.1 || count[&e] > 1;
    let mut budget = 200 * s * d;
    let mut cursor = 0;
    while cursor < edges.len() {
        if !bad(edges[cursor], &count) {
            cursor += 1;
            continue;
        }
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let other = rng.random_range(0..edges.len());
        if other == cursor {
            continue;
        }
        let (a, b) = edges[cursor];
        let (c, d2) = edges[other];
        let (x, y) = if rng.random_bool(0.5) {
            ((a, c), (b, d2))
        } else {
            ((a, d2), (b, c))
        };
        let x = (x.0.min(x.1), x.0.max(x.1));
        let y = (y.0.min(y.1), y.0.max(y.1));
        if x.0 == x.1
            || y.0 == y.1
            || x == y
            || count.get(&x).is_some_and(|&c| c > 0)
            || count.get(&y).is_some_and(|&c| c > 0)
        {
            continue;
        }
        for old in [edges[cursor], edges[other]] {
            *count.get_mut(&old).unwrap() -= 1;
        }
        *count.entry(x).or_default() += 1;
        *count.entry(y).or_default() += 1;
        edges[cursor] = x;
        edges[other] = y;
        // the swapped-in edge at `other` may sit behind the cursor; it is simple by construction
    }
    Some(edges)
}

/// Margulis–Gabber–Galil graph on the smallest `m x m` torus with `m² >= s`,
/// with self-loops dropped and parallel edges collapsed.
pub fn margulis(s: usize) -> StaticGraph {
    let m = (s as f64).sqrt().ceil() as usize;
    let m = if m * m < s { m + 1 } else { m };
    let id = |x: usize, y: usize| (x % m) * m + (y % m);
    let mut pairs = Vec::with_capacity(4 * m * m);
    for x in 0..m {
        for y in 0..m {
            let v = id(x, y);
            for u in [
                id(x + 2 * y, y),
                id(x + 2 * y + 1, y),
                id(x, y + 2 * x),
                id(x, y + 2 * x + 1),
            ] {
                if u != v {
                    pairs.push((v.min(u), v.max(u)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    StaticGraph::from_pairs(m * m, pairs).expect("torus graph")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathProbe {
    pub routed: usize,
    pub attempted: usize,
    pub length_limit: usize,
    pub lengths: Vec<usize>,
}

/// Greedily routes each pair along a shortest path of unused edges, of length
/// at most `len_bound * log2(n)`. A statistical probe of the routing property,
/// not a proof of it.
pub fn edge_disjoint_path_probe(
    g: &StaticGraph,
    pairs: &[(usize, usize)],
    len_bound: f64,
) -> PathProbe {
    let n = g.n();
    let limit = ((len_bound * (n.max(2) as f64).log2()).ceil() as usize).max(1);
    let mut used: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut lengths = Vec::new();
    for &(a, b) in pairs {
        if a == b {
            lengths.push(0);
            continue;
        }
        let mut prev = vec![usize::MAX; n];
        let mut dist = vec![usize::MAX; n];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b || dist[x] >= limit {
                continue;
            }
            for &(y, _) in g.neighbors(x) {
                if dist[y] == usize::MAX && !used.contains(&(x.min(y), x.max(y))) {
                    dist[y] = dist[x] + 1;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if dist[b] == usize::MAX {
            continue;
        }
        let mut x = b;
        while x != a {
            let p = prev[x];
            used.insert((p.min(x), p.max(x)));
            x = p;
        }
        lengths.push(dist[b]);
    }
    PathProbe {
        routed: lengths.len(),
        attempted: pairs.len(),
        length_limit: limit,
        lengths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use crate::graph::generators::cycle;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn gap_of_small_graphs() {
        assert_relative_eq!(
            spectral_gap(&complete(4)).lambda2,
            1.0 / 3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(spectral_gap(&cycle(6)).lambda2, 0.5, epsilon = 1e-12);
        let two_edges = StaticGraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        let gap = spectral_gap(&two_edges);
        assert_eq!(gap.lambda2, 1.0);
        assert!(!gap.connected);
    }

    #[test]
    fn lanczos_gap_matches_dense_oracle() {
        let e = build_expander(400, ExpanderMode::RandomRegular, &mut rng(9)).unwrap();
        let g = &e.graph;
        let n = g.n();
        let mut m = DMatrix::zeros(n, n);
        for edge in g.edges() {
            let x = edge.w / (g.weighted_degree(edge.u) * g.weighted_degree(edge.v)).sqrt();
            m[(edge.u, edge.v)] = x;
            m[(edge.v, edge.u)] = x;
        }
        let ev = symmetric_eigenvalues(m);
        assert_relative_eq!(e.lambda2, ev[n - 2].abs(), epsilon = 1e-6);
        // clustered spectra converge slowly; C_n has λ₂ = cos(2π/n)
        let c = spectral_gap(&cycle(400)).lambda2;
        assert_relative_eq!(
            c,
            (2.0 * std::f64::consts::PI / 400.0).cos(),
            epsilon = 1e-4
        );
    }

    #[test]
    fn degenerate_size_two() {
        let e = build_expander(2, ExpanderMode::RandomRegular, &mut rng(0)).unwrap();
        assert_eq!((e.actual_size, e.graph.num_edges()), (2, 1));
    }

    #[test]
    fn random_regular_256() {
        let e = build_expander(256, ExpanderMode::RandomRegular, &mut rng(1)).unwrap();
        assert_eq!(e.actual_size, 256);
        assert_eq!(e.graph.num_edges(), 1024);
        assert!((0..256).all(|v| e.graph.degree(v) == 8));
        assert!(e.graph.is_connected());
        // independent dense check of the reported value
        let dense = {
            let g = &e.graph;
            let mut m = DMatrix::zeros(256, 256);
            for ed in g.edges() {
                m[(ed.u, ed.v)] = 1.0 / 8.0;
                m[(ed.v, ed.u)] = 1.0 / 8.0;
            }
            symmetric_eigenvalues(m)[254].abs()
        };
        assert_relative_eq!(e.lambda2, dense, epsilon = 1e-10);
        assert!(e.lambda2 <= 0.9);
    }

    #[test]
    fn margulis_on_ten_by_ten() {
        let e = build_expander(100, ExpanderMode::Margulis, &mut rng(0)).unwrap();
        assert_eq!(e.actual_size, 100);
        assert!(e.graph.is_connected());
        assert!(e.graph.max_degree() <= 8);
        assert!(e.lambda2 <= 0.9, "lambda2={}", e.lambda2);
    }

    #[test]
    fn determinism() {
        let a = build_expander(300, ExpanderMode::RandomRegular, &mut rng(42)).unwrap();
        let b = build_expander(300, ExpanderMode::RandomRegular, &mut rng(42)).unwrap();
        assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn size_law_and_invariants() {
        let sizes = [2, 3, 5, 8, 9, 10, 17, 33, 64, 100, 257, 1000, 4096];
        for &s in &sizes {
            for mode in [ExpanderMode::RandomRegular, ExpanderMode::Margulis] {
                let e = build_expander(s, mode, &mut rng(s as u64)).unwrap();
                let ratio = e.actual_size as f64 / s as f64;
                assert!(
                    (1.0..=2.0).contains(&ratio),
                    "s={s} {mode:?} size {}",
                    e.actual_size
                );
                assert!(e.graph.max_degree() <= e.degree_bound);
                assert!(e.graph.num_edges() <= e.degree_bound * e.actual_size / 2);
                assert!(e.graph.is_connected());
                assert!(
                    s <= 2 || e.lambda2 <= 0.9,
                    "s={s} {mode:?} lambda2={}",
                    e.lambda2
                );
            }
        }
    }

    #[test]
    fn exhausted_retries_report_failure() {
        let cfg = ExpanderConfig {
            gap_threshold: 0.01,
            max_retries: 2,
            ..Default::default()
        };
        match build_expander_with(64, ExpanderMode::RandomRegular, &cfg, &mut rng(3)) {
            Err(Error::Construction(msg)) => assert!(msg.contains("best")),
            other => panic!("expected construction failure, got {other:?}"),
        }
    }

    #[test]
    fn path_probe_basics() {
        let g = complete(5);
        assert_eq!(edge_disjoint_path_probe(&g, &[], 4.0).routed, 0);
        let p = edge_disjoint_path_probe(&g, &[(0, 1)], 4.0);
        assert_eq!((p.routed, p.lengths[0]), (1, 1));
    }

    #[test]
    fn path_probe_on_1024_expander() {
        let mut successes = 0;
        for seed in 0..10u64 {
            let mut r = rng(100 + seed);
            let e = build_expander(1024, ExpanderMode::RandomRegular, &mut r).unwrap();
            let pairs: Vec<(usize, usize)> = (0..32)
                .map(|_| (r.random_range(0..1024), r.random_range(0..1024)))
                .collect();
            let probe = edge_disjoint_path_probe(&e.graph, &pairs, 4.0);
            if probe.routed == 32 {
                successes += 1;
            }
        }
        assert!(
            successes >= 9,
            "all pairs routed in only {successes}/10 seeds"
        );
    }
}
