//! Criterion benchmarks for coapprox; see `benches/coapprox.rs`.
