//! Criterion benchmarks for the modspace crate; see `benches/`.
