use super::pauli::SYSTEM_DIM;
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{inv_sqrtm_pd, operator_norm, CMatrix};
use crate::tolerances::Tolerances;

/// Ordered Kraus operators of a two-qubit channel.
///
/// Completeness is measured, not enforced: `completeness_defect` is
/// `max |Σ A_i†A_i - I|` and the set is complete when it does not exceed
/// `tolerance`. Every operator must be a contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    completeness_defect: f64,
    tolerance: f64,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Data("Kraus set is empty".into()));
        }
        for (i, a) in operators.iter().enumerate() {
            if a.dims() != (SYSTEM_DIM, SYSTEM_DIM) {
                return Err(Error::Dimension(format!(
                    "Kraus operator {i} is {}x{}, expected {SYSTEM_DIM}x{SYSTEM_DIM}",
                    a.rows(),
                    a.cols()
                )));
            }
            let norm = operator_norm(a);
            if norm > 1.0 + Tolerances::DEFAULT.contraction {
                return Err(Error::NotContraction {
                    norm,
                    excess: norm - 1.0,
                });
            }
        }
        let completeness_defect = completeness_defect(&operators);
        Ok(KrausSet {
            operators,
            completeness_defect,
            tolerance,
        })
    }

    /// Synthetic set, held to the strict completeness tolerance.
    pub fn synthetic(operators: Vec<CMatrix>) -> Result<Self> {
        Self::new(operators, Tolerances::DEFAULT.completeness)
    }

    /// Set read from experimental data, held to the relaxed tolerance.
    pub fn experimental(operators: Vec<CMatrix>) -> Result<Self> {
        Self::new(operators, Tolerances::DEFAULT.completeness_experimental)
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn completeness_defect(&self) -> f64 {
        self.completeness_defect
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_defect <= self.tolerance
    }

    pub fn ensure_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::IncompleteSet {
                defect: self.completeness_defect,
                tolerance: self.tolerance,
            })
        }
    }

    pub fn operator_norms(&self) -> Vec<f64> {
        self.operators.iter().map(operator_norm).collect()
    }

    /// `Σ A_i†A_i`.
    pub fn completeness_matrix(&self) -> CMatrix {
        completeness_matrix(&self.operators)
    }

    /// Rescales to an exactly complete set: `A_i ← A_i M^{-1/2}`, `M = Σ A_i†A_i`.
    pub fn renormalized(&self) -> Result<KrausSet> {
        let m = self.completeness_matrix().hermitian_part();
        let fix = inv_sqrtm_pd(&m)?;
        let ops = self.operators.iter().map(|a| a * &fix).collect();
        KrausSet::new(ops, self.tolerance)
    }
}

fn completeness_matrix(ops: &[CMatrix]) -> CMatrix {
    ops.iter()
        .fold(CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM), |acc, a| {
            &acc + &(&a.adjoint() * a)
        })
}

fn completeness_defect(ops: &[CMatrix]) -> f64 {
    completeness_matrix(ops).max_abs_diff(&CMatrix::identity(SYSTEM_DIM))
}

/// `Σ_i A_i ρ A_i†` without the completeness or state checks.
pub fn apply_operators(ops: &[CMatrix], rho: &CMatrix) -> CMatrix {
    ops.iter().fold(CMatrix::zeros(rho.rows(), rho.cols()), |acc, a| {
        &acc + &(&(a * rho) * &a.adjoint())
    })
}

/// Operator-sum evolution `ρ ↦ Σ_i A_i ρ A_i†`.
///
/// The output trace may differ from one by up to `4 × defect` for sets that
/// are complete only within a relaxed tolerance.
pub fn kraus_apply(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    k.ensure_complete()?;
    if rho.dim() != SYSTEM_DIM {
        return Err(Error::Dimension(format!(
            "channel acts on dimension {SYSTEM_DIM}, state has {}",
            rho.dim()
        )));
    }
    let out = apply_operators(k.operators(), rho.matrix());
    let tol = Tolerances::DEFAULT.state;
    DensityMatrix::validated(out, tol, tol + 4.0 * k.completeness_defect(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn identity_set_is_complete() {
        let k = KrausSet::synthetic(vec![CMatrix::identity(4)]).unwrap();
        assert!(k.is_complete());
        assert_eq!(k.completeness_defect(), 0.0);
        let rho = DensityMatrix::maximally_mixed(4);
        assert_eq!(kraus_apply(&k, &rho).unwrap(), rho);
    }

    #[test]
    fn incomplete_set_is_rejected_on_apply() {
        let k = KrausSet::synthetic(vec![CMatrix::identity(4).scale_real(0.5)]).unwrap();
        assert!(!k.is_complete());
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(kraus_apply(&k, &rho), Err(Error::IncompleteSet { .. })));
    }

    #[test]
    fn non_contraction_is_rejected() {
        let a = CMatrix::identity(4).scale_real(1.01);
        assert!(matches!(KrausSet::synthetic(vec![a]), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn renormalization_restores_completeness() {
        let a = CMatrix::from_real_diag(&[0.6, 0.7, 0.8, 0.9]);
        let b = CMatrix::from_real_diag(&[0.7, 0.6, 0.5, 0.4]);
        let k = KrausSet::experimental(vec![a, b]).unwrap();
        assert!(k.completeness_defect() > 1e-3);
        let fixed = k.renormalized().unwrap();
        assert!(fixed.completeness_defect() < 1e-14);
    }

    #[test]
    fn wrong_dimension() {
        let err = KrausSet::synthetic(vec![CMatrix::identity(2)]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(KrausSet::synthetic(vec![]).is_err());
        let _ = C64::new(0.0, 0.0);
    }
}
