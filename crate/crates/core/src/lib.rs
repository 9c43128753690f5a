//! Gauge color codes on colored simplicial lattices.
//!
//! Lattice construction, GF(2) verification of the code algebra, transversal
//! phase gates, gauge fixing and a small statevector simulator.

pub mod cli;
pub mod code;
pub mod demo;
pub mod gf2;
pub mod lattice;
pub mod pauli;
pub mod protocol;
pub mod report;
pub mod sim;
pub mod transversal;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;
