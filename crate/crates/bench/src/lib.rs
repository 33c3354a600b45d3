//! Criterion benchmarks for `starprod-core`; see `benches/`.
