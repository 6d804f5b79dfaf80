//! Benchmark fixtures live in `zigzag_core::bench`; this crate only hosts the criterion harness.
