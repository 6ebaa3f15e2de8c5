//! Criterion benchmarks for schubert-core live in `benches/`.
