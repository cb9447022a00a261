//! Minimal unitary dilation of contractions and the ancilla bookkeeping
//! around it.
//!
//! For a contraction `A` the 8×8 block matrix
//!
//! ```text
//! U = [ A        √(I - AA†) ]
//!     [ √(I-A†A)    -A†     ]
//! ```
//!
//! is unitary. The ancilla is the most significant qubit, so `|0⟩ ⊗ |φ⟩`
//! fills the first four amplitudes and projecting the ancilla back onto
//! `|0⟩` is the top-left 4×4 block.

use rayon::prelude::*;

use crate::channel::{DensityMatrix, KrausSet, StateVector, SYSTEM_DIM};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, sqrtm_psd, CMatrix, C64, ZERO};
use crate::tolerances::Tolerances;

pub const DILATED_DIM: usize = 2 * SYSTEM_DIM;

#[derive(Debug, Clone, PartialEq)]
pub struct DilationUnitary {
    pub kraus_index: usize,
    pub matrix: CMatrix,
    pub source_dim: usize,
}

impl DilationUnitary {
    /// The operator in the top-left block.
    pub fn source(&self) -> CMatrix {
        self.matrix.block(0, 0, self.source_dim, self.source_dim)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.unitarity_defect()
    }
}

/// Subnormalized output block for one Kraus branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedOutcome {
    pub block: CMatrix,
    pub weight: f64,
}

/// Dilation of a single operator, tagged with index 0.
pub fn dilate(a: &CMatrix) -> Result<DilationUnitary> {
    dilate_indexed(a, 0)
}

pub fn dilate_indexed(a: &CMatrix, kraus_index: usize) -> Result<DilationUnitary> {
    if a.dims() != (SYSTEM_DIM, SYSTEM_DIM) {
        return Err(Error::Dimension(format!(
            "dilation needs a {SYSTEM_DIM}x{SYSTEM_DIM} operator, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let norm = operator_norm(a);
    let slack = Tolerances::DEFAULT.contraction;
    let a = if norm > 1.0 + slack {
        return Err(Error::NotContraction {
            norm,
            excess: norm - 1.0,
        });
    } else if norm > 1.0 {
        log::warn!(
            "Kraus operator {kraus_index} has norm {norm:.15}; rescaling by 1/norm"
        );
        a.scale_real(1.0 / norm)
    } else {
        a.clone()
    };
    let id = CMatrix::identity(SYSTEM_DIM);
    let ad = a.adjoint();
    let d_a = sqrtm_psd(&(&id - &(&ad * &a)))?;
    let d_ad = sqrtm_psd(&(&id - &(&a * &ad)))?;
    let matrix = CMatrix::from_blocks(&a, &d_ad, &d_a, &(-&ad));
    Ok(DilationUnitary {
        kraus_index,
        matrix,
        source_dim: SYSTEM_DIM,
    })
}

/// Dilations of every operator in a Kraus set, in order.
pub fn dilate_set(k: &KrausSet) -> Result<Vec<DilationUnitary>> {
    k.operators()
        .iter()
        .enumerate()
        .map(|(i, a)| dilate_indexed(a, i))
        .collect()
}

/// `|0⟩ ⊗ |φ⟩`.
pub fn embed_state(phi: &StateVector) -> Result<StateVector> {
    if phi.dim() != SYSTEM_DIM {
        return Err(Error::Dimension(format!(
            "embedding needs a {SYSTEM_DIM}-dimensional state, got {}",
            phi.dim()
        )));
    }
    let mut v = phi.amplitudes().to_vec();
    v.resize(DILATED_DIM, ZERO);
    StateVector::new(v)
}

/// Top-left block of `U |0,φ⟩⟨0,φ| U†` for any 8×8 matrix `U` (a dilation
/// or the unitary of a compiled circuit).
pub fn project_through(u: &CMatrix, phi: &StateVector) -> Result<ProjectedOutcome> {
    let psi = u.mul_vec(embed_state(phi)?.amplitudes());
    let top: Vec<C64> = psi[..SYSTEM_DIM].to_vec();
    let block = CMatrix::outer(&top, &top);
    let weight = block.trace().re;
    Ok(ProjectedOutcome { block, weight })
}

pub fn simulate_kraus_via_dilation(u: &DilationUnitary, phi: &StateVector) -> Result<ProjectedOutcome> {
    project_through(&u.matrix, phi)
}

/// Full channel action through the dilations: mixed inputs are
/// decomposed spectrally and each eigenvector is pushed through every dilation.
pub fn simulate_channel_via_dilation(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    k.ensure_complete()?;
    let unitaries = dilate_set(k)?;
    let mats: Vec<CMatrix> = unitaries.into_iter().map(|u| u.matrix).collect();
    let out = simulate_with_unitaries(&mats, rho)?;
    let tol = Tolerances::DEFAULT.state;
    DensityMatrix::validated(out, tol, tol + 4.0 * k.completeness_defect(), tol)
}

/// `Σ_j p_j Σ_i P U_i |0,φ_j⟩⟨0,φ_j| U_i† P` for the given 8×8 unitaries.
pub fn simulate_with_unitaries(unitaries: &[CMatrix], rho: &DensityMatrix) -> Result<CMatrix> {
    let parts = rho.spectral_decomposition(Tolerances::DEFAULT.spectral_cutoff)?;
    let blocks: Vec<CMatrix> = parts
        .par_iter()
        .map(|(p, phi)| -> Result<CMatrix> {
            let mut acc = CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM);
            for u in unitaries {
                acc = &acc + &project_through(u, phi)?.block;
            }
            Ok(acc.scale_real(*p))
        })
        .collect::<Result<_>>()?;
    Ok(blocks
        .iter()
        .fold(CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM), |acc, b| &acc + b))
}
