use super::{cut_in_backend, membership, CutResult};
use crate::error::{domain, Error, Result};
use crate::graph::{OracleHandle, StaticGraph};
use crate::sparsifier::{sublinear_sparsify, SparsifyConfig};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxFlow {
    pub value: u64,
    /// Source side of a minimum cut (vertices reachable in the residual graph).
    pub source_side: Vec<usize>,
}

struct Arc {
    to: usize,
    cap: u64,
}

/// Dinic's algorithm on an undirected graph with integer capacities.
struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            next: vec![0; n],
        }
    }

    /// An undirected edge is a pair of arcs that are each other's reverse.
    fn add_undirected(&mut self, u: usize, v: usize, cap: u64) {
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] == usize::MAX {
                    self.level[arc.to] = self.level[x] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn dfs(&mut self, x: usize, t: usize, pushed: u64) -> u64 {
        if x == t {
            return pushed;
        }
        while self.next[x] < self.adj[x].len() {
            let a = self.adj[x][self.next[x]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && self.level[to] == self.level[x] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.next[x] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

/// Exact maximum `s`-`t` flow; every edge weight must be a positive integer.
pub fn max_flow_exact(g: &StaticGraph, s: usize, t: usize) -> Result<MaxFlow> {
    let n = g.n();
    if s >= n || t >= n || s == t {
        return domain(format!(
            "need distinct terminals in 0..{n}, got s={s}, t={t}"
        ));
    }
    let mut d = Dinic::new(n);
    for e in g.edges() {
        if e.w.fract() != 0.0 || e.w < 1.0 || e.w > u64::MAX as f64 {
            return domain(format!(
                "edge ({},{}) has non-integer capacity {}",
                e.u, e.v, e.w
            ));
        }
        d.add_undirected(e.u, e.v, e.w as u64);
    }
    let value = d.run(s, t);
    d.bfs(s, t);
    let source_side = (0..n).filter(|&v| d.level[v] != usize::MAX).collect();
    Ok(MaxFlow { value, source_side })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinCutConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// Template for the sparsifier call; `epsilon`, `delta` and `seed` are set from this config.
    pub sparsify: SparsifyConfig,
}

impl MinCutConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            sparsify: SparsifyConfig::new(epsilon / 4.0, epsilon / 4.0, seed),
        }
    }
}

/// Sparsifies at `(ε/4, δ = ε/4)`, scales weights by `D` and rounds half-up,
/// runs exact max flow on the integer graph and returns its cut with the value
/// recomputed on the input graph.
pub fn min_st_cut_approx(
    h: &mut OracleHandle,
    s: usize,
    t: usize,
    cfg: &MinCutConfig,
) -> Result<CutResult> {
    let n = h.n();
    if s >= n || t >= n || s == t {
        return domain(format!(
            "need distinct terminals in 0..{n}, got s={s}, t={t}"
        ));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in (0,1), got {}",
            cfg.epsilon
        )));
    }
    let mut sc = cfg.sparsify;
    sc.epsilon = cfg.epsilon / 4.0;
    sc.delta = cfg.epsilon / 4.0;
    sc.seed = cfg.seed;
    let denom = sc.round_denominator as f64;
    let before = h.counts();
    let out = sublinear_sparsify(h, &sc)?;
    let after = h.counts();
    let rounded = out.graph.map_weights(|w| (w * denom + 0.5).floor())?;
    let flow = max_flow_exact(&rounded, s, t)?;
    let in_set = membership(n, &flow.source_side);
    let value = cut_in_backend(h.backend(), &in_set);
    let sparsifier_value = out.graph.cut_value(&in_set);
    let mut details = BTreeMap::new();
    details.insert("epsilon".into(), cfg.epsilon);
    details.insert("sparsifier_epsilon".into(), sc.epsilon);
    details.insert("delta".into(), sc.delta);
    details.insert("denominator".into(), denom);
    details.insert("rounded_flow".into(), flow.value as f64);
    details.insert(
        "rounding_bound".into(),
        out.graph.num_edges() as f64 / denom,
    );
    details.insert(
        "additive_budget".into(),
        sc.delta * n as f64 + out.graph.num_edges() as f64 / denom,
    );
    Ok(CutResult {
        set: flow.source_side,
        value,
        sparsifier_value,
        ratio: None,
        sparsifier_ratio: None,
        iterations: 1,
        certified: true,
        delta_schedule: vec![sc.delta],
        retries: 0,
        queries: crate::graph::QueryCounts {
            vertex: after.vertex - before.vertex,
            degree: after.degree - before.degree,
            edge: after.edge - before.edge,
        },
        details,
        warnings: out.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, gnp};
    use rand::{Rng, SeedableRng};

    /// Exhaustive min cut over all partitions with `s` inside and `t` outside.
    fn brute_min_cut(g: &StaticGraph, s: usize, t: usize) -> f64 {
        let n = g.n();
        let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
        let mut best = f64::INFINITY;
        for mask in 0u64..(1 << others.len()) {
            let mut in_set = vec![false; n];
            in_set[s] = true;
            for (i, &v) in others.iter().enumerate() {
                in_set[v] = (mask >> i) & 1 == 1;
            }
            best = best.min(g.cut_value(&in_set));
        }
        best
    }

    #[test]
    fn flow_examples() {
        let e = StaticGraph::from_weighted_edges(2, [(0, 1, 5.0)]).unwrap();
        assert_eq!(max_flow_exact(&e, 0, 1).unwrap().value, 5);
        let two_paths = StaticGraph::from_weighted_edges(
            4,
            [(0, 1, 2.0), (1, 3, 2.0), (0, 2, 3.0), (2, 3, 3.0)],
        )
        .unwrap();
        let f = max_flow_exact(&two_paths, 0, 3).unwrap();
        assert_eq!(f.value, 5);
        assert!(f.source_side.contains(&0) && !f.source_side.contains(&3));
        let frac = StaticGraph::from_weighted_edges(2, [(0, 1, 0.5)]).unwrap();
        assert!(max_flow_exact(&frac, 0, 1).is_err());
        assert!(max_flow_exact(&e, 1, 1).is_err());
    }

    #[test]
    fn flow_equals_exhaustive_min_cut() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = r.random_range(4..=16);
            let base = gnp(n, 0.4, &mut r);
            let g = base
                .map_weights(|_| f64::from(r.random_range(1u32..=9)))
                .unwrap();
            let f = max_flow_exact(&g, 0, n - 1).unwrap();
            let side = g.membership(&f.source_side).unwrap();
            assert_eq!(g.cut_value(&side), f.value as f64, "duality");
            assert_eq!(f.value as f64, brute_min_cut(&g, 0, n - 1));
        }
    }

    #[test]
    fn approx_cut_examples() {
        let g = complete(8).disjoint_union(&complete(8));
        let mut h = OracleHandle::from_graph(g);
        let res = min_st_cut_approx(&mut h, 0, 12, &MinCutConfig::new(0.5, 1)).unwrap();
        assert_eq!(res.value, 0.0);

        let mut h = OracleHandle::from_graph(complete(2));
        let res = min_st_cut_approx(&mut h, 0, 1, &MinCutConfig::new(0.5, 1)).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.set, vec![0]);
        assert!(min_st_cut_approx(&mut h, 0, 0, &MinCutConfig::new(0.5, 1)).is_err());
        assert!(min_st_cut_approx(&mut h, 0, 5, &MinCutConfig::new(0.5, 1)).is_err());
    }

    #[test]
    fn approx_cut_is_near_optimal() {
        let g = gnp(60, 0.4, &mut rand_chacha::ChaCha8Rng::seed_from_u64(5));
        let exact = max_flow_exact(&g, 0, 1).unwrap().value as f64;
        let mut h = OracleHandle::from_graph(g.clone());
        let res = min_st_cut_approx(&mut h, 0, 1, &MinCutConfig::new(0.3, 2)).unwrap();
        assert_eq!(res.value, g.cut_value_of(&res.set).unwrap());
        assert!(res.value >= exact);
        assert!(res.value <= exact + 4.0 * 0.3 * 60.0);
    }
}
