//! Dense density-matrix engine over named qubit registers.

mod layout;
mod measure;
mod perm;
mod state;

pub mod gates;

pub use layout::{Register, RegisterLayout};
pub use measure::{sample, Distribution};
pub use perm::BasisPermutation;
pub use state::{fidelity, trace_distance, Operator, QuantumState, MAX_QUBITS};
pub(crate) use state::{hermitian_eigenvalues, mixed_qubit};
