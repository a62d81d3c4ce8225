//! Criterion benchmarks for the enumeration and fiber code; see `benches/`.
