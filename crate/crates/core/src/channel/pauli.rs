use std::sync::OnceLock;

use crate::linalg::{kron, CMatrix, C64, I, ONE, ZERO};

/// Number of qubits in the simulated system.
pub const SYSTEM_QUBITS: usize = 2;
/// Hilbert-space dimension of the simulated system.
pub const SYSTEM_DIM: usize = 4;
/// Number of operators in the two-qubit Pauli basis.
pub const BASIS_LEN: usize = 16;

/// `σ_0..σ_3 = I, X, Y, Z`.
pub fn pauli(k: usize) -> CMatrix {
    match k {
        0 => CMatrix::identity(2),
        1 => CMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]),
        3 => CMatrix::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// Operator basis `E[4a + b] = σ_a ⊗ σ_b` (zero-based: `E[0] = I⊗I`,
/// `E[3] = I⊗Z`, `E[12] = Z⊗I`, `E[15] = Z⊗Z`). Unnormalized, `Tr(E_m† E_n) = 4 δ_mn`.
pub fn pauli_basis() -> &'static [CMatrix] {
    static BASIS: OnceLock<Vec<CMatrix>> = OnceLock::new();
    BASIS.get_or_init(|| {
        (0..BASIS_LEN)
            .map(|m| kron(&pauli(m / 4), &pauli(m % 4)))
            .collect()
    })
}

/// Human-readable label such as `"IZ"` or `"ZZ"`.
pub fn basis_label(m: usize) -> String {
    const NAMES: [char; 4] = ['I', 'X', 'Y', 'Z'];
    format!("{}{}", NAMES[m / 4], NAMES[m % 4])
}

/// Expansion coefficients `c_m = Tr(E_m† A) / 4`.
pub fn pauli_coefficients(a: &CMatrix) -> Vec<C64> {
    pauli_basis()
        .iter()
        .map(|e| e.inner(a) / SYSTEM_DIM as f64)
        .collect()
}

/// `Σ_m c_m E_m`.
pub fn from_pauli_coefficients(c: &[C64]) -> CMatrix {
    let mut out = CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM);
    for (e, &cm) in pauli_basis().iter().zip(c) {
        if cm != ZERO {
            out = &out + &e.scale(cm);
        }
    }
    out
}
