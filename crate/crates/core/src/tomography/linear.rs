use super::{gram, stacked, TomographyRecord};
use crate::channel::{superop_to_chi, ChiMatrix, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{condition_number_psd, solve, CMatrix};
use crate::tolerances::Tolerances;

/// Least-squares superoperator `S = Σ P† (P P†)⁻¹` from the stacked
/// vectorized inputs `P` and outputs `Σ`.
pub fn linear_inversion_superop(rec: &TomographyRecord) -> Result<Superoperator> {
    let g = gram(rec.inputs());
    let condition = condition_number_psd(&g)?;
    log::debug!("tomography Gram condition number {condition:.6e}");
    if !(condition <= Tolerances::DEFAULT.max_condition) {
        return Err(Error::SingularSystem { condition });
    }
    let ins: Vec<CMatrix> = rec.inputs().iter().map(|d| d.matrix().clone()).collect();
    let p = stacked(&ins);
    let sigma = stacked(rec.outputs());
    // S G = Σ P†  ⇔  G S† = P Σ†  (G Hermitian).
    let s_adj = solve(&g, &(&p * &sigma.adjoint()))?;
    Superoperator::new(s_adj.adjoint())
}

/// χ of the least-squares linear map reproducing the record.
pub fn linear_inversion_qpt(rec: &TomographyRecord) -> Result<ChiMatrix> {
    Ok(superop_to_chi(&linear_inversion_superop(rec)?))
}

/// `Σ_k ‖Λ_χ(ρ_k) − out_k‖²_F`.
pub fn qpt_objective(rec: &TomographyRecord, chi: &ChiMatrix) -> f64 {
    let s = chi.to_superoperator();
    rec.inputs()
        .iter()
        .zip(rec.outputs())
        .map(|(i, o)| {
            let d = &s.apply(i.matrix()) - o;
            d.frobenius_norm().powi(2)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{dephasing_generator, DephasingParams};
    use crate::tomography::InputBasis;

    #[test]
    fn identity_outputs_give_identity_chi() {
        let rec = TomographyRecord::from_channel(&InputBasis::new(), |r| Ok(r.matrix().clone())).unwrap();
        let chi = linear_inversion_qpt(&rec).unwrap();
        assert!(chi.matrix().distance(ChiMatrix::identity_channel().matrix()) < 1e-12);
        assert!(qpt_objective(&rec, &chi) < 1e-24);
    }

    #[test]
    fn dephasing_chi_recovered() {
        let p = DephasingParams::default();
        let s = dephasing_generator(&p).exp(p.t);
        let rec = TomographyRecord::from_channel(&InputBasis::new(), |r| Ok(s.apply(r.matrix()))).unwrap();
        let chi = linear_inversion_qpt(&rec).unwrap();
        assert!(chi.matrix().distance(superop_to_chi(&s).matrix()) < 1e-12);
    }

    #[test]
    fn singular_inputs_are_rejected() {
        let b = InputBasis::new();
        let first = b.density_matrices()[0].clone();
        let inputs = vec![first; 16];
        let outputs: Vec<CMatrix> = inputs.iter().map(|d| d.matrix().clone()).collect();
        let rec = TomographyRecord::new(inputs, outputs).unwrap();
        assert!(matches!(linear_inversion_qpt(&rec), Err(Error::SingularSystem { .. })));
    }
}
