//! Criterion benchmarks for confalg; see `benches/`.
