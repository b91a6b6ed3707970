//! Criterion benchmarks for `jbtriple`; see `benches/`.
