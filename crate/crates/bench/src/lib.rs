//! Criterion benchmarks for the step solvers; see `benches/`.
