//! Small deterministic and random graph families used by tests, drivers and the CLI.

use super::StaticGraph;
use rand::Rng;

pub fn complete(n: usize) -> StaticGraph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    StaticGraph::from_pairs(n, pairs).expect("complete graph")
}

pub fn path(n: usize) -> StaticGraph {
    StaticGraph::from_pairs(n, (1..n).map(|v| (v - 1, v))).expect("path graph")
}

pub fn cycle(n: usize) -> StaticGraph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    StaticGraph::from_pairs(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle graph")
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> StaticGraph {
    StaticGraph::from_pairs(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star graph")
}

/// Two disjoint `K_size` joined by the single edge `(size-1, size)`.
pub fn two_cliques_with_bridge(size: usize) -> StaticGraph {
    let a = complete(size);
    let both = a.disjoint_union(&a);
    let bridge = StaticGraph::from_pairs(2 * size, [(size - 1, size)]).expect("bridge");
    both.union(&bridge).expect("same vertex set")
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> StaticGraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    StaticGraph::from_pairs(n, pairs).expect("gnp graph")
}

/// Stochastic block model: blocks of the given sizes, pair probability `probs[a][b]`.
pub fn stochastic_block<R: Rng + ?Sized>(
    sizes: &[usize],
    probs: &[Vec<f64>],
    rng: &mut R,
) -> StaticGraph {
    let n: usize = sizes.iter().sum();
    let mut block = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(b, s));
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = probs[block[u]][block[v]];
            if p >= 1.0 || (p > 0.0 && rng.random_bool(p)) {
                pairs.push((u, v));
            }
        }
    }
    StaticGraph::from_pairs(n, pairs).expect("sbm graph")
}
