use crate::error::{domain, Error, Result};
use crate::graph::{OracleHandle, OverlayGraph, StaticGraph};
use rand::Rng;
use std::collections::HashMap;

/// Uniform random subset of `size` vertices, read through the vertex oracle.
pub fn pick_v_delta<R: Rng + ?Sized>(
    h: &mut OracleHandle,
    size: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = h.n();
    if size > n {
        return domain(format!("cannot pick {size} vertices from n={n}"));
    }
    rand::seq::index::sample(rng, n, size)
        .into_iter()
        .map(|i| h.vertex(i + 1))
        .collect()
}

/// Outcome of one draw: an edge with its probability, or an isolated vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeDraw {
    Edge { u: usize, v: usize, p: f64 },
    Isolated(usize),
}

/// `p(u,v) = 1/(n d(u)) + 1/(n d(v))`, evaluated in a canonical endpoint order
/// so the same edge always gets the bit-identical value.
pub fn edge_probability(n: usize, (u, du): (usize, usize), (v, dv): (usize, usize)) -> f64 {
    let n = n as f64;
    let (da, db) = if u < v { (du, dv) } else { (dv, du) };
    1.0 / (n * da as f64) + 1.0 / (n * db as f64)
}

/// One draw: uniform vertex `w`, then a uniform index into its `G̃`
/// neighbor list. Edge `(u,v)` is produced with probability exactly
/// `1/(n d(u)) + 1/(n d(v))`. Three or four oracle calls.
pub fn draw_edge<R: Rng + ?Sized>(tg: &mut OverlayGraph<'_>, rng: &mut R) -> Result<EdgeDraw> {
    let n = tg.n();
    let w = tg.vertex(rng.random_range(1..=n))?;
    let (base_w, over_w) = tg.degree_split(w)?;
    let dw = base_w + over_w;
    if dw == 0 {
        return Ok(EdgeDraw::Isolated(w));
    }
    let x = tg.neighbor_with_base_degree(w, rng.random_range(1..=dw), base_w)?;
    let dx = tg.degree(x)?;
    Ok(EdgeDraw::Edge {
        u: w.min(x),
        v: w.max(x),
        p: edge_probability(n, (w, dw), (x, dx)),
    })
}

const MAX_REDRAWS: usize = 1024;

/// Like [`draw_edge`] but redraws when the vertex is isolated.
pub fn sample_edge<R: Rng + ?Sized>(
    tg: &mut OverlayGraph<'_>,
    rng: &mut R,
) -> Result<(usize, usize, f64)> {
    for _ in 0..MAX_REDRAWS {
        if let EdgeDraw::Edge { u, v, p } = draw_edge(tg, rng)? {
            return Ok((u, v, p));
        }
    }
    Err(Error::Domain(format!(
        "{MAX_REDRAWS} consecutive draws hit isolated vertices"
    )))
}

/// `q` draws from `draw`, each sampled edge added with weight `1/(q p(e))`,
/// repeated samples merged. `None` draws consume a slot and add nothing.
pub fn sparsify<F>(n: usize, q: u64, mut draw: F) -> Result<StaticGraph>
where
    F: FnMut() -> Result<Option<(usize, usize, f64)>>,
{
    if q == 0 {
        return domain("sample count q must be >= 1");
    }
    let mut tally: HashMap<(usize, usize), (u64, f64)> = HashMap::new();
    for _ in 0..q {
        if let Some((u, v, p)) = draw()? {
            if !(p > 0.0) {
                return domain(format!("edge ({u},{v}) sampled with probability {p}"));
            }
            let key = (u.min(v), u.max(v));
            let slot = tally.entry(key).or_insert((0, p));
            slot.0 += 1;
        }
    }
    let mut entries: Vec<((usize, usize), (u64, f64))> = tally.into_iter().collect();
    entries.sort_unstable_by_key(|&(k, _)| k);
    let qf = q as f64;
    StaticGraph::from_weighted_edges(
        n,
        entries
            .into_iter()
            .map(|((u, v), (count, p))| (u, v, count as f64 / (qf * p))),
    )
}
