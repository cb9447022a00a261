use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, vec_norm, CMatrix, C64, ONE, ZERO};
use crate::tolerances::Tolerances;

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tol = Tolerances::DEFAULT.state;
        Self::validated(matrix, tol, tol, tol)
    }

    /// Validation with separate tolerances for Hermiticity, trace and
    /// positivity. The stored matrix is the Hermitian part of the input.
    pub fn validated(matrix: CMatrix, hermiticity: f64, trace: f64, positivity: f64) -> Result<Self> {
        let (r, c) = matrix.dims();
        if r != c || !(r == 4 || r == 8) {
            return Err(Error::Dimension(format!(
                "density matrix must be 4x4 or 8x8, got {r}x{c}"
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > hermiticity {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > trace {
            return Err(Error::InvalidState(format!("trace {tr:.12} differs from 1")));
        }
        let min = eig_hermitian(&matrix)?.min();
        if min < -positivity {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        DensityMatrix {
            matrix: CMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Spectral decomposition `ρ = Σ p_j |φ_j⟩⟨φ_j|`, keeping weights above `cutoff`.
    pub fn spectral_decomposition(&self, cutoff: f64) -> Result<Vec<(f64, StateVector)>> {
        let e = eig_hermitian(&self.matrix)?;
        Ok(e
            .values
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > cutoff)
            .map(|(k, &p)| (p, StateVector(e.vector(k))))
            .collect())
    }
}

/// Normalized pure-state amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.normalization {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector(amplitudes))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }
}
