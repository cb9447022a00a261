use serde::{Deserialize, Serialize};

use super::pauli::SYSTEM_DIM;
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{expm, kron, CMatrix, C64};
use crate::tolerances::Tolerances;

const N2: usize = SYSTEM_DIM * SYSTEM_DIM;

/// Linear map on row-major vectorized two-qubit density matrices
/// (`vec(ρ)[4i + j] = ρ_ij`).
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dims() != (N2, N2) {
            return Err(Error::Dimension(format!(
                "superoperator must be {N2}x{N2}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Superoperator { matrix })
    }

    pub fn identity() -> Self {
        Superoperator {
            matrix: CMatrix::identity(N2),
        }
    }

    /// `Σ_i A_i ⊗ conj(A_i)`, the row-major representation of `ρ ↦ Σ A_i ρ A_i†`.
    pub fn from_kraus(ops: &[CMatrix]) -> Self {
        let matrix = ops
            .iter()
            .fold(CMatrix::zeros(N2, N2), |acc, a| &acc + &kron(a, &a.conj()));
        Superoperator { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Applies the map to an arbitrary 4×4 matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let v = self.matrix.mul_vec(&rho.vec_row_major());
        CMatrix::unvec_row_major(&v, SYSTEM_DIM, SYSTEM_DIM)
    }

    /// Largest deviation of the trace functional `Σ_k S[4k+k, ·]` from that of the identity.
    pub fn trace_preservation_defect(&self) -> f64 {
        (0..N2)
            .map(|col| {
                let s: C64 = (0..SYSTEM_DIM).map(|k| self.matrix[(5 * k, col)]).sum();
                let target = if col % 5 == 0 { 1.0 } else { 0.0 };
                (s - C64::new(target, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    fn is_diagonal(&self) -> bool {
        (0..N2).all(|i| (0..N2).all(|j| i == j || self.matrix[(i, j)] == C64::new(0.0, 0.0)))
    }

    /// `exp(self · t)`, element-wise on the diagonal when possible.
    pub fn exp(&self, t: f64) -> Superoperator {
        let matrix = if self.is_diagonal() {
            let d: Vec<C64> = self.matrix.diag().iter().map(|z| (z * t).exp()).collect();
            CMatrix::from_diag(&d)
        } else {
            expm(&self.matrix.scale_real(t))
        };
        Superoperator { matrix }
    }
}

/// Independent phase-damping rates of the two qubits and the evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub t: f64,
}

impl DephasingParams {
    pub fn new(gamma1: f64, gamma2: f64, t: f64) -> Result<Self> {
        let p = DephasingParams { gamma1, gamma2, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma1", self.gamma1), ("gamma2", self.gamma2), ("t", self.t)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Data(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Coherence retention `p = (1 + e^{-γt})/2` of each qubit.
    pub fn retention(&self) -> (f64, f64) {
        (
            0.5 * (1.0 + (-self.gamma1 * self.t).exp()),
            0.5 * (1.0 + (-self.gamma2 * self.t).exp()),
        )
    }
}

impl Default for DephasingParams {
    fn default() -> Self {
        DephasingParams {
            gamma1: 1.4,
            gamma2: 1.5,
            t: 2.0,
        }
    }
}

/// Diagonal generator of independent dephasing. Entry `k = 4i + j` is
/// `-γ₁[bit1(i) ≠ bit1(j)] - γ₂[bit2(i) ≠ bit2(j)]`, bit 1 being the most significant.
pub fn dephasing_generator(p: &DephasingParams) -> Superoperator {
    let bit1 = |x: usize| (x >> 1) & 1;
    let bit2 = |x: usize| x & 1;
    let d: Vec<f64> = (0..N2)
        .map(|k| {
            let (i, j) = (k / SYSTEM_DIM, k % SYSTEM_DIM);
            let mut v = 0.0;
            if bit1(i) != bit1(j) {
                v -= p.gamma1;
            }
            if bit2(i) != bit2(j) {
                v -= p.gamma2;
            }
            v
        })
        .collect();
    Superoperator {
        matrix: CMatrix::from_real_diag(&d),
    }
}

/// Evolution `unvec(exp(z t) vec(ρ))`.
pub fn evolve_superop(z: &Superoperator, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != SYSTEM_DIM {
        return Err(Error::Dimension(format!(
            "superoperator acts on dimension {SYSTEM_DIM}, state has {}",
            rho.dim()
        )));
    }
    let out = z.exp(t).apply(rho.matrix());
    let tol = Tolerances::DEFAULT.evolved_state;
    DensityMatrix::validated(out, tol, tol, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(s: &Superoperator) -> Vec<f64> {
        s.matrix().diag().iter().map(|z| z.re).collect()
    }

    #[test]
    fn first_qubit_generator_pattern() {
        let g = dephasing_generator(&DephasingParams::new(1.0, 0.0, 1.0).unwrap());
        let expect = [
            0., 0., -1., -1., 0., 0., -1., -1., -1., -1., 0., 0., -1., -1., 0., 0.,
        ];
        assert_eq!(diag_of(&g), expect);
    }

    #[test]
    fn second_qubit_generator_zeros() {
        let g = dephasing_generator(&DephasingParams::new(0.0, 1.0, 1.0).unwrap());
        let zeros: Vec<usize> = diag_of(&g)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0.0)
            .map(|(k, _)| k)
            .collect();
        assert_eq!(zeros, vec![0, 2, 5, 7, 8, 10, 13, 15]);
    }

    #[test]
    fn zero_rates_give_zero_generator() {
        let g = dephasing_generator(&DephasingParams::new(0.0, 0.0, 2.0).unwrap());
        assert_eq!(g.matrix().max_abs(), 0.0);
        assert_eq!(g.exp(2.0), Superoperator::identity());
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(DephasingParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(DephasingParams::new(0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn diagonal_and_dense_exponentials_agree() {
        let g = dephasing_generator(&DephasingParams::default());
        let dense = expm(&g.matrix().scale_real(2.0));
        assert!(g.exp(2.0).matrix().approx_eq(&dense, 1e-12));
    }

    #[test]
    fn kraus_superoperator_is_trace_preserving() {
        let h = CMatrix::from_real_diag(&[1.0, -1.0, 1.0, -1.0]);
        let s = Superoperator::from_kraus(&[h.scale_real(0.6), CMatrix::identity(4).scale_real(0.8)]);
        assert!(s.trace_preservation_defect() < 1e-15);
        let half = Superoperator::from_kraus(&[CMatrix::identity(4).scale_real(0.5)]);
        assert!((half.trace_preservation_defect() - 0.75).abs() < 1e-15);
    }
}
