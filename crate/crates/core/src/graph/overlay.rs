use super::{OracleHandle, StaticGraph};
use crate::error::{domain, Result};
use std::collections::HashMap;

/// `G̃ = G ∪ E`: a base graph read through its oracles plus a small explicit
/// graph placed on a vertex subset.
///
/// Neighbor `i` of `v` is a base neighbor for `i <= d_G(v)` and an overlay
/// neighbor after that. Only base queries are counted.
#[derive(Debug)]
pub struct OverlayGraph<'h> {
    base: &'h mut OracleHandle,
    overlay: StaticGraph,
    mapping: Vec<usize>,
    slot: HashMap<usize, usize>,
}

/// Places `expander` on `subset` (expander vertex `j` becomes `subset[j]`).
pub fn overlay_union<'h>(
    base: &'h mut OracleHandle,
    expander: StaticGraph,
    subset: &[usize],
) -> Result<OverlayGraph<'h>> {
    if subset.len() != expander.n() {
        return domain(format!(
            "subset has {} vertices but the overlay graph has {}",
            subset.len(),
            expander.n()
        ));
    }
    let n = base.n();
    let mut slot = HashMap::with_capacity(subset.len());
    for (j, &v) in subset.iter().enumerate() {
        if v >= n {
            return domain(format!("subset vertex {v} out of range for n={n}"));
        }
        if slot.insert(v, j).is_some() {
            return domain(format!("subset repeats vertex {v}"));
        }
    }
    Ok(OverlayGraph {
        base,
        overlay: expander,
        mapping: subset.to_vec(),
        slot,
    })
}

impl<'h> OverlayGraph<'h> {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn overlay_degree(&self, v: usize) -> usize {
        self.slot.get(&v).map_or(0, |&j| self.overlay.degree(j))
    }

    /// `(d_G(v), d_E(v))`, one counted degree query.
    pub fn degree_split(&mut self, v: usize) -> Result<(usize, usize)> {
        let base = self.base.degree(v)?;
        Ok((base, self.overlay_degree(v)))
    }

    pub fn degree(&mut self, v: usize) -> Result<usize> {
        let (b, o) = self.degree_split(v)?;
        Ok(b + o)
    }

    /// Vertex oracle of the base graph.
    pub fn vertex(&mut self, i: usize) -> Result<usize> {
        self.base.vertex(i)
    }

    /// `i`-th neighbor (1-based) when the base degree is already known.
    pub fn neighbor_with_base_degree(
        &mut self,
        v: usize,
        i: usize,
        base_degree: usize,
    ) -> Result<usize> {
        if i == 0 {
            return domain("neighbor index is 1-based");
        }
        if i <= base_degree {
            return self.base.neighbor(v, i);
        }
        let k = i - base_degree - 1;
        match self.slot.get(&v) {
            Some(&j) if k < self.overlay.degree(j) => {
                Ok(self.mapping[self.overlay.neighbors(j)[k].0])
            }
            _ => domain(format!(
                "neighbor index {i} outside 1..={} for vertex {v}",
                base_degree + self.overlay_degree(v)
            )),
        }
    }

    pub fn neighbor(&mut self, v: usize, i: usize) -> Result<usize> {
        let base_degree = self.base.degree(v)?;
        self.neighbor_with_base_degree(v, i, base_degree)
    }

    pub fn base(&self) -> &OracleHandle {
        self.base
    }

    pub fn overlay(&self) -> &StaticGraph {
        &self.overlay
    }

    pub fn subset(&self) -> &[usize] {
        &self.mapping
    }

    /// Overlay edges mapped into base vertex ids.
    pub fn overlay_in_base(&self) -> StaticGraph {
        let n = self.n();
        StaticGraph::from_pairs(
            n,
            self.overlay
                .edges()
                .map(|e| (self.mapping[e.u], self.mapping[e.v]))
                .collect::<Vec<_>>(),
        )
        .expect("mapping is injective")
    }

    /// `G̃` as an explicit weighted graph (coinciding edges get weight 2).
    /// Reads the base through the uncounted backend.
    pub fn materialize(&self) -> StaticGraph {
        self.base
            .materialize()
            .union(&self.overlay_in_base())
            .expect("same vertex set")
    }
}
