use super::chi::ChiMatrix;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tolerances::Tolerances;

/// `|Tr(a b†)| / √(Tr(a a†) Tr(b b†))`.
///
/// This is the quantity reported as "fidelity" for both process matrices
/// and output states; it is 1 exactly when `a ∝ b`.
pub fn normalized_overlap(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension(format!(
            "overlap of {}x{} and {}x{} matrices",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let na = a.frobenius_norm();
    let nb = b.frobenius_norm();
    let floor = Tolerances::DEFAULT.zero_norm;
    if na < floor || nb < floor {
        return Err(Error::ZeroMatrix);
    }
    Ok((b.inner(a).norm() / (na * nb)).min(1.0))
}

/// Process fidelity between two χ matrices.
pub fn process_fidelity(a: &ChiMatrix, b: &ChiMatrix) -> Result<f64> {
    normalized_overlap(a.matrix(), b.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::chi::superop_to_chi;
    use crate::channel::superop::{dephasing_generator, DephasingParams};
    use crate::linalg::C64;

    #[test]
    fn self_overlap_and_orthogonality() {
        let a = CMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]);
        let b = CMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]);
        assert!((normalized_overlap(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(normalized_overlap(&a, &b).unwrap(), 0.0);
        let f = process_fidelity(&ChiMatrix::identity_channel(), &ChiMatrix::basis_element(15));
        assert_eq!(f.unwrap(), 0.0);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let a = CMatrix::identity(4);
        let z = CMatrix::zeros(4, 4);
        assert!(matches!(normalized_overlap(&a, &z), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn scale_invariance() {
        let a = CMatrix::from_fn(4, 4, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let b = CMatrix::from_fn(4, 4, |i, j| C64::new((i * j) as f64, 0.0)).hermitian_part();
        let f = normalized_overlap(&a, &b).unwrap();
        let g = normalized_overlap(&a.scale_real(3.7), &b).unwrap();
        assert!((f - g).abs() < 1e-12);
    }

    #[test]
    fn dephasing_against_identity() {
        let p = DephasingParams::default();
        let chi = superop_to_chi(&dephasing_generator(&p).exp(p.t));
        let f = process_fidelity(&chi, &ChiMatrix::identity_channel()).unwrap();
        assert!((f - 0.554).abs() < 0.01, "{f}");
    }
}
