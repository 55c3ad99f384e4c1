//! Criterion benchmarks for the sparsifier pipeline live under `benches/`.
