use super::{cut_in_backend, membership, CutResult};
use crate::error::{domain, Error, Result};
use crate::graph::{OracleHandle, QueryCounts, StaticGraph};
use crate::linalg::{ensure_within_budget, laplacian_dense};
use crate::rng::SeedSplitter;
use crate::sparsifier::{max_delta, sublinear_sparsify, SparsifyConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Largest `n` accepted by [`brute_force_sparsest_cut`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

const TIE: f64 = 1e-12;

fn better(ratio: f64, set: &[usize], best_ratio: f64, best: &[usize]) -> bool {
    if best.is_empty() || ratio < best_ratio - TIE * best_ratio.max(1.0) {
        return true;
    }
    ratio <= best_ratio + TIE * best_ratio.max(1.0) && set < best
}

/// Exhaustive minimum of `Cut(U)/|U|` over nonempty `U` with `|U| <= n/2`,
/// ties broken toward the lexicographically smallest vertex list. Subsets are
/// visited in Gray-code order so each step updates the cut in `O(deg)`.
pub fn brute_force_sparsest_cut(g: &StaticGraph) -> Result<(Vec<usize>, f64)> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Budget(format!(
            "brute-force sparsest cut needs n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )));
    }
    if n < 2 {
        return domain(format!("sparsest cut needs at least 2 vertices, got {n}"));
    }
    let mut in_set = vec![false; n];
    // weight from each vertex into the current set
    let mut into = vec![0.0; n];
    let mut cut = 0.0;
    let mut size = 0usize;
    let mut best: Vec<usize> = Vec::new();
    let mut best_ratio = f64::INFINITY;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let deg = g.weighted_degree(v);
        if in_set[v] {
            in_set[v] = false;
            size -= 1;
            cut -= deg - 2.0 * into[v];
            for &(u, w) in g.neighbors(v) {
                into[u] -= w;
            }
        } else {
            in_set[v] = true;
            size += 1;
            cut += deg - 2.0 * into[v];
            for &(u, w) in g.neighbors(v) {
                into[u] += w;
            }
        }
        if size == 0 || 2 * size > n {
            continue;
        }
        let ratio = cut.max(0.0) / size as f64;
        if best.is_empty() || ratio <= best_ratio + TIE * best_ratio.max(1.0) {
            let set: Vec<usize> = (0..n).filter(|&u| in_set[u]).collect();
            if better(ratio, &set, best_ratio, &best) {
                best = set;
                best_ratio = ratio;
            }
        }
    }
    // recompute to shed accumulated rounding
    let exact = g.cut_value(&membership(n, &best)) / best.len() as f64;
    Ok((best, exact))
}

/// Fiedler-vector sweep: orders vertices by the second Laplacian eigenvector
/// and returns the prefix (from either end) of size at most `n/2` with the
/// smallest `Cut/|U|`. A disconnected graph yields its smallest component.
pub fn sweep_cut(g: &StaticGraph) -> Result<Vec<usize>> {
    let n = g.n();
    if n < 2 {
        return domain(format!("sweep cut needs at least 2 vertices, got {n}"));
    }
    let (count, label) = g.components();
    if count > 1 {
        let mut members = vec![Vec::new(); count];
        for v in 0..n {
            members[label[v]].push(v);
        }
        return Ok(members.into_iter().min_by_key(|m| m.len()).unwrap());
    }
    ensure_within_budget(n, "sweep cut")?;
    let eig = laplacian_dense(g).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let fiedler = eig.eigenvectors.column(order[1]);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));

    let mut best: Vec<usize> = Vec::new();
    let mut best_ratio = f64::INFINITY;
    for seq in [verts.clone(), verts.into_iter().rev().collect()] {
        let mut in_set = vec![false; n];
        let mut into = vec![0.0; n];
        let mut cut = 0.0;
        for (k, &v) in seq.iter().enumerate().take(n / 2) {
            cut += g.weighted_degree(v) - 2.0 * into[v];
            in_set[v] = true;
            for &(u, w) in g.neighbors(v) {
                into[u] += w;
            }
            let ratio = cut.max(0.0) / (k + 1) as f64;
            if best.is_empty() || ratio < best_ratio - TIE * best_ratio.max(1.0) {
                best_ratio = ratio;
                best = seq[..=k].to_vec();
            }
        }
    }
    best.sort_unstable();
    Ok(best)
}

/// Cut-finders usable as the driver's subroutine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutSubroutine {
    #[default]
    Sweep,
    BruteForce,
}

impl CutSubroutine {
    pub fn find(self, g: &StaticGraph) -> Result<Vec<usize>> {
        match self {
            CutSubroutine::Sweep => sweep_cut(g),
            CutSubroutine::BruteForce => brute_force_sparsest_cut(g).map(|(u, _)| u),
        }
    }
}

impl FromStr for CutSubroutine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sweep" => Ok(CutSubroutine::Sweep),
            "brute-force" => Ok(CutSubroutine::BruteForce),
            other => Err(Error::Config(format!(
                "unknown cut subroutine '{other}' (expected sweep or brute-force)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsestCutConfig {
    pub alpha_estimate: f64,
    pub seed: u64,
    /// Template for each sparsifier call; `delta` and `seed` are overwritten.
    pub sparsify: SparsifyConfig,
    /// Loop cap; `None` means `⌈log₂ n⌉ + 2`.
    pub max_iterations: Option<usize>,
    /// Fresh-seed retries per iteration when the subroutine returns an empty or full set.
    pub max_retries: usize,
}

impl SparsestCutConfig {
    pub fn new(alpha_estimate: f64, seed: u64) -> Self {
        Self {
            alpha_estimate,
            seed,
            sparsify: SparsifyConfig::new(0.5, 0.1, seed),
            max_iterations: None,
            max_retries: 8,
        }
    }
}

/// Sparsify at `(½, δ)` starting from `δ = 1/ln n`, run `subroutine` on `H̄`,
/// and halve `δ` until `δ <= OPT̄/(2α)` where `OPT̄ = Cut_H̄(Ū)/|Ū|`.
/// `OPT̄ = 0` is accepted at once.
pub fn sparsest_cut_driver<F>(
    h: &mut OracleHandle,
    mut subroutine: F,
    cfg: &SparsestCutConfig,
) -> Result<CutResult>
where
    F: FnMut(&StaticGraph) -> Result<Vec<usize>>,
{
    let n = h.n();
    if n < 3 {
        return domain(format!("sparsest cut driver needs n >= 3, got {n}"));
    }
    if !(cfg.alpha_estimate >= 1.0) {
        return Err(Error::Config(format!(
            "alpha estimate must be >= 1, got {}",
            cfg.alpha_estimate
        )));
    }
    let cap = cfg
        .max_iterations
        .unwrap_or((n as f64).log2().ceil() as usize + 2)
        .max(1);
    let seeds = SeedSplitter::new(cfg.seed);
    let before = h.counts();
    let mut delta = max_delta(n).min(1.0);
    let mut schedule = Vec::new();
    let mut retries = 0;
    let mut attempt = 0u64;
    let mut warnings = Vec::new();
    let mut last = None;
    let mut certified = false;
    for _ in 0..cap {
        schedule.push(delta);
        let mut found = None;
        for _ in 0..=cfg.max_retries {
            let mut sc = cfg.sparsify;
            sc.epsilon = 0.5;
            sc.delta = delta;
            sc.seed = seeds.substream_seed("sparsest-cut", attempt);
            attempt += 1;
            let out = sublinear_sparsify(h, &sc)?;
            warnings.extend(out.warnings.iter().cloned());
            let mut set = subroutine(&out.graph)?;
            set.sort_unstable();
            set.dedup();
            if set.iter().any(|&v| v >= n) {
                return domain("subroutine returned a vertex out of range");
            }
            if set.is_empty() || set.len() == n {
                retries += 1;
                continue;
            }
            if 2 * set.len() > n {
                let inside = membership(n, &set);
                set = (0..n).filter(|&v| !inside[v]).collect();
            }
            found = Some((set, out.graph));
            break;
        }
        let Some((set, hbar)) = found else {
            return Err(Error::Construction(format!(
                "subroutine returned an empty or full set {} times in a row",
                cfg.max_retries + 1
            )));
        };
        let hval = hbar.cut_value(&membership(n, &set));
        let opt_bar = hval / set.len() as f64;
        let accept = opt_bar == 0.0 || delta <= opt_bar / (2.0 * cfg.alpha_estimate);
        last = Some((set, hval, opt_bar));
        if accept {
            certified = true;
            break;
        }
        delta /= 2.0;
    }
    let (set, hval, opt_bar) = last.expect("at least one iteration");
    if !certified {
        warnings.push(format!(
            "iteration cap {cap} reached before delta <= OPT/(2 alpha); result is uncertified"
        ));
    } else {
        debug_assert!(
            opt_bar == 0.0 || *schedule.last().unwrap() <= opt_bar / (2.0 * cfg.alpha_estimate)
        );
    }
    let value = cut_in_backend(h.backend(), &membership(n, &set));
    let after = h.counts();
    let mut details = BTreeMap::new();
    details.insert("alpha_estimate".into(), cfg.alpha_estimate);
    details.insert("delta_exit".into(), *schedule.last().unwrap());
    Ok(CutResult {
        ratio: Some(value / set.len() as f64),
        sparsifier_ratio: Some(opt_bar),
        set,
        value,
        sparsifier_value: hval,
        iterations: schedule.len(),
        certified,
        delta_schedule: schedule,
        retries,
        queries: QueryCounts {
            vertex: after.vertex - before.vertex,
            degree: after.degree - before.degree,
            edge: after.edge - before.edge,
        },
        details,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, gnp, path, two_cliques_with_bridge};
    use rand::SeedableRng;

    /// Independent oracle: plain enumeration with exact recomputation.
    fn naive(g: &StaticGraph) -> (Vec<usize>, f64) {
        let n = g.n();
        let mut best = (Vec::new(), f64::INFINITY);
        for mask in 1u64..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| (mask >> v) & 1 == 1).collect();
            if 2 * set.len() > n {
                continue;
            }
            let r = g.cut_value_of(&set).unwrap() / set.len() as f64;
            if r < best.1 - 1e-12 || ((r - best.1).abs() <= 1e-12 && set < best.0) {
                best = (set, r);
            }
        }
        best
    }

    #[test]
    fn brute_force_examples() {
        let (u, r) = brute_force_sparsest_cut(&complete(3)).unwrap();
        assert_eq!((u, r), (vec![0], 2.0));
        let (u, r) = brute_force_sparsest_cut(&two_cliques_with_bridge(3)).unwrap();
        assert_eq!(u, vec![0, 1, 2]);
        assert!((r - 1.0 / 3.0).abs() < 1e-12);
        let split = StaticGraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(brute_force_sparsest_cut(&split).unwrap(), (vec![0, 1], 0.0));
        assert!(matches!(
            brute_force_sparsest_cut(&complete(21)),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn brute_force_matches_naive_enumeration() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in [4, 7, 10, 13] {
            for _ in 0..5 {
                let g = gnp(n, 0.4, &mut r);
                let (u, ratio) = brute_force_sparsest_cut(&g).unwrap();
                let (nu, nratio) = naive(&g);
                assert!((ratio - nratio).abs() < 1e-12);
                assert_eq!(u, nu);
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let g = two_cliques_with_bridge(6);
        let u = sweep_cut(&g).unwrap();
        let (bu, br) = brute_force_sparsest_cut(&g).unwrap();
        assert!(u == bu || u == (6..12).collect::<Vec<_>>());
        assert!((g.cut_value_of(&u).unwrap() / u.len() as f64 - br).abs() < 1e-12);

        let k = complete(9);
        let u = sweep_cut(&k).unwrap();
        let ratio = k.cut_value_of(&u).unwrap() / u.len() as f64;
        assert_eq!(ratio, (9 - u.len()) as f64);
        assert!(ratio >= 4.5);

        for n in [6, 11, 16] {
            let p = path(n);
            let u = sweep_cut(&p).unwrap();
            let (_, br) = brute_force_sparsest_cut(&p).unwrap();
            let ratio = p.cut_value_of(&u).unwrap() / u.len() as f64;
            assert!((ratio - br).abs() < 1e-12, "P_{n}: {ratio} vs {br}");
        }

        let split = StaticGraph::from_pairs(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(sweep_cut(&split).unwrap(), vec![3, 4]);
    }

    #[test]
    fn driver_finds_planted_cut() {
        let g = two_cliques_with_bridge(8);
        let mut h = OracleHandle::from_graph(g.clone());
        let cfg = SparsestCutConfig::new(1.0, 4);
        let res = sparsest_cut_driver(&mut h, sweep_cut, &cfg).unwrap();
        assert!(res.certified);
        assert_eq!(res.set.len(), 8);
        assert_eq!(res.value, 1.0);
        assert!(res.iterations <= 4 + 2);
        assert_eq!(res.value, g.cut_value_of(&res.set).unwrap());
        let exit = *res.delta_schedule.last().unwrap();
        assert!(exit <= res.sparsifier_ratio.unwrap() / 2.0);
        for w in res.delta_schedule.windows(2) {
            assert_eq!(w[1], w[0] / 2.0);
        }
    }

    #[test]
    fn driver_on_disconnected_graph_returns_zero_ratio() {
        let g = complete(6).disjoint_union(&complete(6));
        let mut h = OracleHandle::from_graph(g);
        let mut cfg = SparsestCutConfig::new(1.0, 2);
        cfg.sparsify.q_multiplier = 1.0;
        let res = sparsest_cut_driver(&mut h, sweep_cut, &cfg).unwrap();
        assert_eq!(res.ratio, Some(0.0));
        assert!(res.certified);
        if res.sparsifier_value == 0.0 {
            assert_eq!(res.iterations, 1);
        }
    }

    #[test]
    fn driver_retries_degenerate_subroutine() {
        let mut h = OracleHandle::from_graph(two_cliques_with_bridge(5));
        let mut calls = 0;
        let sub = |g: &StaticGraph| {
            calls += 1;
            if calls < 3 {
                Ok(Vec::new())
            } else {
                sweep_cut(g)
            }
        };
        let res = sparsest_cut_driver(&mut h, sub, &SparsestCutConfig::new(1.0, 3)).unwrap();
        assert_eq!(res.retries, 2);
        let mut h = OracleHandle::from_graph(two_cliques_with_bridge(5));
        let always_full = |g: &StaticGraph| Ok((0..g.n()).collect());
        assert!(sparsest_cut_driver(&mut h, always_full, &SparsestCutConfig::new(1.0, 3)).is_err());
    }

    #[test]
    fn driver_respects_iteration_cap() {
        let mut h = OracleHandle::from_graph(complete(12));
        let mut cfg = SparsestCutConfig::new(1e6, 5);
        cfg.max_iterations = Some(3);
        let res = sparsest_cut_driver(&mut h, sweep_cut, &cfg).unwrap();
        assert_eq!(res.iterations, 3);
        assert!(!res.certified);
        assert!(!res.warnings.is_empty());
    }
}
