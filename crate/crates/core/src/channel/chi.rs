use super::kraus::KrausSet;
use super::pauli::{pauli_basis, pauli_coefficients, BASIS_LEN, SYSTEM_DIM};
use super::superop::Superoperator;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, CMatrix, HermitianEig, C64, ZERO};
use crate::tolerances::Tolerances;

/// Process matrix in the two-qubit Pauli basis: `Λ(ρ) = Σ_mn χ_mn E_m ρ E_n†`.
///
/// Normalized so that the identity channel has `χ[0][0] = 1`; a
/// trace-preserving channel has `Tr χ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    matrix: CMatrix,
}

impl ChiMatrix {
    /// Validates shape and Hermiticity, then stores the Hermitian part.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dims() != (BASIS_LEN, BASIS_LEN) {
            return Err(Error::Dimension(format!(
                "chi matrix must be {BASIS_LEN}x{BASIS_LEN}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > Tolerances::DEFAULT.hermiticity {
            return Err(Error::NotHermitian { defect });
        }
        Ok(ChiMatrix {
            matrix: matrix.hermitian_part(),
        })
    }

    pub(crate) fn from_hermitian(matrix: CMatrix) -> Self {
        ChiMatrix {
            matrix: matrix.hermitian_part(),
        }
    }

    /// Single nonzero entry `χ[m][m] = 1`: the unitary channel `ρ ↦ E_m ρ E_m`.
    pub fn basis_element(m: usize) -> Self {
        let mut matrix = CMatrix::zeros(BASIS_LEN, BASIS_LEN);
        matrix[(m, m)] = C64::new(1.0, 0.0);
        ChiMatrix { matrix }
    }

    pub fn identity_channel() -> Self {
        Self::basis_element(0)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigen(&self) -> Result<HermitianEig> {
        eig_hermitian(&self.matrix)
    }

    /// `Σ_mn χ_mn E_n†E_m`, equal to `I` for trace-preserving maps.
    pub fn tp_matrix(&self) -> CMatrix {
        let e = pauli_basis();
        let mut out = CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM);
        for m in 0..BASIS_LEN {
            for n in 0..BASIS_LEN {
                let c = self.matrix[(m, n)];
                if c != ZERO {
                    out = &out + &(&e[n].adjoint() * &e[m]).scale(c);
                }
            }
        }
        out
    }

    /// Max-element deviation of [`tp_matrix`](Self::tp_matrix) from the identity.
    pub fn tp_defect(&self) -> f64 {
        self.tp_matrix().max_abs_diff(&CMatrix::identity(SYSTEM_DIM))
    }

    /// `Σ_mn χ_mn E_m ⊗ conj(E_n)`.
    pub fn to_superoperator(&self) -> Superoperator {
        let e = pauli_basis();
        let n2 = SYSTEM_DIM * SYSTEM_DIM;
        let mut s = CMatrix::zeros(n2, n2);
        for m in 0..BASIS_LEN {
            for n in 0..BASIS_LEN {
                let c = self.matrix[(m, n)];
                if c != ZERO {
                    s = &s + &kron(&e[m], &e[n].conj()).scale(c);
                }
            }
        }
        Superoperator::new(s).expect("shape is fixed")
    }

    /// Applies the channel to an arbitrary 4×4 matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.to_superoperator().apply(rho)
    }
}

/// Matrix whose column `m` is `vec(E_m)` (row-major).
pub(crate) fn basis_change() -> CMatrix {
    let e = pauli_basis();
    let mut b = CMatrix::zeros(BASIS_LEN, BASIS_LEN);
    for (m, em) in e.iter().enumerate() {
        b.set_col(m, &em.vec_row_major());
    }
    b
}

/// Realignment between the row-major superoperator and the Choi matrix:
/// `R[(i,k),(j,l)] = S[(i,j),(k,l)]`. The map is an involution.
pub fn reshuffle(s: &CMatrix) -> CMatrix {
    let d = SYSTEM_DIM;
    CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        s[(d * i + j, d * k + l)]
    })
}

/// χ from the Choi-type matrix `R = B χ B†`, `B†B = 4I`.
pub fn choi_to_chi(r: &CMatrix) -> ChiMatrix {
    let b = basis_change();
    let chi = (&(&b.adjoint() * r) * &b).scale_real(1.0 / 16.0);
    ChiMatrix::from_hermitian(chi)
}

/// Inverse of [`choi_to_chi`].
pub fn chi_to_choi(chi: &ChiMatrix) -> CMatrix {
    let b = basis_change();
    &(&b * chi.matrix()) * &b.adjoint()
}

pub fn superop_to_chi(s: &Superoperator) -> ChiMatrix {
    choi_to_chi(&reshuffle(s.matrix()))
}

/// Kraus operators from the eigendecomposition `χ = V D V†`:
/// `A_i = √d_i Σ_j V_ji E_j`, one per eigenvalue above the cutoff, in
/// descending eigenvalue order.
pub fn chi_to_kraus(chi: &ChiMatrix) -> Result<KrausSet> {
    chi_to_kraus_with(chi, Tolerances::DEFAULT.completeness)
}

/// As [`chi_to_kraus`] with an explicit completeness tolerance for the result.
pub fn chi_to_kraus_with(chi: &ChiMatrix, completeness: f64) -> Result<KrausSet> {
    let tol = Tolerances::DEFAULT;
    let eig = chi.eigen()?;
    let min = eig.min();
    if min < -tol.cp_clamp {
        return Err(Error::NotCp { min_eigenvalue: min });
    }
    let e = pauli_basis();
    let ops: Vec<CMatrix> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > tol.kraus_cutoff)
        .map(|(i, &d)| {
            let s = d.sqrt();
            let mut a = CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM);
            for (j, ej) in e.iter().enumerate() {
                let v = eig.vectors[(j, i)];
                if v != ZERO {
                    a = &a + &ej.scale(v * s);
                }
            }
            a
        })
        .collect();
    if ops.is_empty() {
        return Err(Error::ZeroMatrix);
    }
    KrausSet::new(ops, completeness)
}

/// `χ_mn = Σ_i c_im conj(c_in)` with `c_im = Tr(E_m† A_i)/4`.
pub fn kraus_to_chi(k: &KrausSet) -> ChiMatrix {
    kraus_operators_to_chi(k.operators())
}

pub fn kraus_operators_to_chi(ops: &[CMatrix]) -> ChiMatrix {
    let mut chi = CMatrix::zeros(BASIS_LEN, BASIS_LEN);
    for a in ops {
        let c = pauli_coefficients(a);
        chi = &chi + &CMatrix::outer(&c, &c);
    }
    ChiMatrix::from_hermitian(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::superop::{dephasing_generator, DephasingParams};

    fn dephasing_chi() -> ChiMatrix {
        let p = DephasingParams::default();
        superop_to_chi(&dephasing_generator(&p).exp(p.t))
    }

    #[test]
    fn identity_channel_chi() {
        let chi = superop_to_chi(&Superoperator::identity());
        assert!(chi.matrix().approx_eq(ChiMatrix::identity_channel().matrix(), 1e-15));
        let k = chi_to_kraus(&chi).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.operators()[0].approx_eq(&CMatrix::identity(4), 1e-14));
    }

    #[test]
    fn unitary_basis_channel_chi() {
        let zi = pauli_basis()[12].clone();
        let chi = superop_to_chi(&Superoperator::from_kraus(&[zi]));
        assert!(chi.matrix().approx_eq(ChiMatrix::basis_element(12).matrix(), 1e-15));
    }

    #[test]
    fn dephasing_chi_is_diagonal_on_four_entries() {
        let chi = dephasing_chi();
        let expect = [(0, 0.2784), (3, 0.2520), (12, 0.2465), (15, 0.2231)];
        for (m, v) in expect {
            assert!((chi.matrix()[(m, m)].re - v).abs() < 1e-3, "entry {m}");
        }
        let mut off = chi.matrix().clone();
        for (m, _) in expect {
            off[(m, m)] = ZERO;
        }
        assert!(off.max_abs() < 1e-15);
        assert!((chi.trace() - 1.0).abs() < 1e-14);
        assert!(chi.tp_defect() < 1e-14);
    }

    #[test]
    fn dephasing_kraus_magnitudes() {
        let k = chi_to_kraus(&dephasing_chi()).unwrap();
        let expect = [0.5277, 0.5020, 0.4965, 0.4723];
        assert_eq!(k.len(), 4);
        for (a, want) in k.operators().iter().zip(expect) {
            for i in 0..4 {
                assert!((a[(i, i)].norm() - want).abs() < 1e-3);
            }
            let off = a - &CMatrix::from_diag(&a.diag());
            assert!(off.max_abs() < 1e-14);
        }
        assert!(k.completeness_defect() < 1e-14);
    }

    #[test]
    fn mixture_of_two_unitaries() {
        let mut m = CMatrix::zeros(16, 16);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(15, 15)] = C64::new(0.5, 0.0);
        let chi = ChiMatrix::new(m).unwrap();
        let k = chi_to_kraus(&chi).unwrap();
        assert_eq!(k.len(), 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let targets = [CMatrix::identity(4).scale_real(r), pauli_basis()[15].scale_real(r)];
        for a in k.operators() {
            let hit = targets.iter().any(|t| (t.inner(a).norm() - 2.0).abs() < 1e-12);
            assert!(hit);
        }
    }

    #[test]
    fn kraus_chi_round_trip() {
        let chi = dephasing_chi();
        let back = kraus_to_chi(&chi_to_kraus(&chi).unwrap());
        assert!(back.matrix().distance(chi.matrix()) < 1e-12);
    }

    #[test]
    fn superoperator_round_trip() {
        let s = dephasing_generator(&DephasingParams::default()).exp(2.0);
        let back = superop_to_chi(&s).to_superoperator();
        assert!(back.matrix().approx_eq(s.matrix(), 1e-14));
        assert!(reshuffle(&reshuffle(s.matrix())).approx_eq(s.matrix(), 0.0));
    }

    #[test]
    fn negative_spectrum_is_not_cp() {
        let mut m = CMatrix::zeros(16, 16);
        m[(0, 0)] = C64::new(1.1, 0.0);
        m[(1, 1)] = C64::new(-0.1, 0.0);
        let chi = ChiMatrix::new(m).unwrap();
        assert!(matches!(chi_to_kraus(&chi), Err(Error::NotCp { .. })));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(16, 16);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(ChiMatrix::new(m), Err(Error::NotHermitian { .. })));
    }
}
