//! Probabilistic spectral sparsification of unweighted graphs under the
//! three-oracle (vertex, degree, neighbor) access model.
//!
//! The pipeline places a constant-degree expander on a random vertex subset,
//! samples edges with probability `1/(n d(u)) + 1/(n d(v))` using a number of
//! oracle calls independent of the edge count, and optionally resparsifies the
//! result by effective-resistance sampling. The remaining modules verify the
//! guarantees exactly at desk scale, drive cut problems through the sparsifier,
//! and reproduce the lower-bound constructions.

pub mod cuts;
pub mod error;
pub mod expander;
pub mod graph;
pub mod hardness;
pub mod linalg;
pub mod rng;
pub mod sparsifier;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{
    implicit_backend, load_edge_list, store_edge_list, BackendSpec, OracleHandle, QueryCounts,
    StaticGraph, WeightedGraph,
};
pub use rng::SeedSplitter;
