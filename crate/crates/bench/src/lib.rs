//! Criterion benchmarks for the numerical kernels live in `benches/`.

pub use qcd_core;
