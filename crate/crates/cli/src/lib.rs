//! Batch frontend for residue interaction networks: trajectory loading for
//! the `rin` binary and the phase-timing benchmark harness.

pub mod bench;
pub mod input;
