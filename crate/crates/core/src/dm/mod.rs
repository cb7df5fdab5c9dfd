//! Dense density-matrix simulation.

mod gate;
mod observable;
mod operator;
mod state;

pub use gate::Gate;
pub use observable::Observable;
pub use operator::{Operator, C64, DEFAULT_MAX_QUBITS};
pub use state::{DensityMatrix, HERMITIAN_TOL, IMAG_TOL, PSD_TOL, TRACE_TOL};
