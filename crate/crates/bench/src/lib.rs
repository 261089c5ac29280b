//! Criterion benchmarks for `realzoo`; see `benches/`.
