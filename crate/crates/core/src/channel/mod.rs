//! Two-qubit channel representations and the conversions among them.

pub mod chi;
pub mod kraus;
pub mod metrics;
pub mod pauli;
pub mod state;
pub mod superop;

pub use chi::{
    chi_to_kraus, chi_to_kraus_with, choi_to_chi, chi_to_choi, kraus_operators_to_chi,
    kraus_to_chi, reshuffle, superop_to_chi, ChiMatrix,
};
pub use kraus::{apply_operators, kraus_apply, KrausSet};
pub use metrics::{normalized_overlap, process_fidelity};
pub use pauli::{basis_label, pauli, pauli_basis, BASIS_LEN, SYSTEM_DIM, SYSTEM_QUBITS};
pub use state::{DensityMatrix, StateVector};
pub use superop::{dephasing_generator, evolve_superop, DephasingParams, Superoperator};
