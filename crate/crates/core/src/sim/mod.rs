//! Simulation engines producing single-qubit Pauli expectations.
//!
//! Two independent routes are provided: dense statevector simulation (with
//! optional shot sampling) and Heisenberg-picture Pauli backpropagation with
//! coefficient truncation.

mod cache;
mod pauli;
mod project;
mod statevector;

pub use cache::FeatureCache;
pub use pauli::{
    backpropagate_observable, obp_expectation, ObservableSum, PauliString, MAX_PAULI_QUBITS,
};
pub use project::{
    circuit_features, clamp_to_bloch_ball, project_features, project_rows, read_feature_csv, write_feature_csv, Backend,
    EmbeddingConfig, RdmFeatureMatrix,
};
pub use statevector::{
    pauli_expectation, sample_expectation, statevector_simulate, StateVector,
    StatevectorSimulator, DEFAULT_MAX_QUBITS,
};

use serde::{Deserialize, Serialize};

/// Single-qubit Pauli measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        }
    }
}
