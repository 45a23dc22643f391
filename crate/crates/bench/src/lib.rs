//! Criterion benchmarks for the gsnkit pipeline; see `benches/`.
