//! Criterion benchmarks for kobalab live under `benches/`.
