//! Benchmark harness crate; see the `benches/` directory for the targets.
//!
//! * `sweep`: parallel per-prime statistics sweeps.
//! * `factor`: integer factorization and bivariate factor counting.
//! * `sieve`: set generation and the larger-sieve evaluation.
//! * `sampling`: uniform draws from the iterated wreath tower.
