//! Simulation and verification tools for circuits whose qubits are split into
//! noiseless ("clean") and noisy ("dirty") sets.

pub mod bounds;
pub mod circuit;
pub mod dm;
pub mod error;
pub mod hva;
pub mod ladder;
pub mod noise;
pub mod pauli;
pub mod program;
pub mod random;

pub use dm::{DensityMatrix, Gate, Observable, Operator, C64};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString, ZString};
