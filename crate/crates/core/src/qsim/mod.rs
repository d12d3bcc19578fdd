//! Noiseless statevector simulation of the Pauli-Hamiltonian encoding.

mod dense;
mod encoding;
mod pauli;
mod state;

pub use dense::{exact_evolution, hamiltonian_matrix, kernel_via_density, pauli_matrix, DENSE_QUBIT_LIMIT};
pub use encoding::{clamp_unit, encode, hamiltonian_expectation_zero, kernel_value, state_kernel, EncodingSpec};
pub use pauli::{Pauli, PauliString, MAX_QUBITS};
pub use state::{StateVector, MAX_STATE_QUBITS};
