//! Criterion benchmarks for the qgraph crate live in `benches/`.
