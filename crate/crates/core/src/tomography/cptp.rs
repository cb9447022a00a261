//! CPTP-constrained least-squares tomography.
//!
//! Minimizes `f(R) = ‖S(R) P − Σ‖²_F` over Choi matrices `R` that are
//! positive semidefinite and satisfy `Tr_out R = I`, where `S(R)` is the
//! superoperator obtained by reshuffling. Each iteration takes a gradient
//! step of length `1/L`, `L = 2 λ_max(P P†)`, with Nesterov momentum that
//! restarts whenever the objective rises, and projects back onto the
//! feasible set with Dykstra's alternating projections between the PSD
//! cone (eigenvalue clamping) and the trace-preserving affine subspace
//! (closed form).

use super::linear::linear_inversion_superop;
use super::{gram, stacked, TomographyRecord};
use crate::channel::{choi_to_chi, reshuffle, superop_to_chi, ChiMatrix, SYSTEM_DIM};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, CMatrix};
use crate::tolerances::Tolerances;

const DYKSTRA_MAX: usize = 20_000;
/// Gap between the two Dykstra iterates (Choi units) accepted as converged.
const DYKSTRA_GAP: f64 = 2e-11;
/// Objective changes below this are roundoff regardless of scale.
const OBJECTIVE_FLOOR: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq)]
pub struct CptpFit {
    pub chi: ChiMatrix,
    pub objective: f64,
    pub iterations: usize,
    pub tp_defect: f64,
    pub min_eigenvalue: f64,
}

fn partial_trace_out(r: &CMatrix) -> CMatrix {
    let d = SYSTEM_DIM;
    CMatrix::from_fn(d, d, |k, l| (0..d).map(|i| r[(d * i + k, d * i + l)]).sum())
}

fn project_tp(r: &CMatrix) -> CMatrix {
    let d = SYSTEM_DIM;
    let excess = &partial_trace_out(r) - &CMatrix::identity(d);
    r - &kron(&CMatrix::identity(d), &excess).scale_real(1.0 / d as f64)
}

fn project_psd(r: &CMatrix) -> Result<CMatrix> {
    let e = eig_hermitian(&r.hermitian_part())?;
    Ok(e.reconstruct_with(|v| v.max(0.0)).hermitian_part())
}

/// Euclidean projection onto PSD ∩ TP. The returned point is exactly
/// trace preserving.
fn project_cptp(y: &CMatrix) -> Result<CMatrix> {
    let n = y.rows();
    let mut x = y.clone();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    for _ in 0..DYKSTRA_MAX {
        let z = project_psd(&(&x + &p))?;
        p = &(&x + &p) - &z;
        let x_new = project_tp(&(&z + &q));
        q = &(&z + &q) - &x_new;
        let gap = x_new.distance(&z);
        x = x_new;
        if gap < DYKSTRA_GAP {
            break;
        }
    }
    Ok(x)
}

fn tp_defect(r: &CMatrix) -> f64 {
    partial_trace_out(r).max_abs_diff(&CMatrix::identity(SYSTEM_DIM))
}

fn objective(r: &CMatrix, p: &CMatrix, sigma: &CMatrix) -> f64 {
    (&(&reshuffle(r) * p) - sigma).frobenius_norm().powi(2)
}

/// Linear-inversion χ with negative eigenvalues clamped and the trace
/// rescaled to one. Neither CP-and-TP nor optimal; used as a reference point.
pub fn clamped_linear_estimate(rec: &TomographyRecord) -> Result<ChiMatrix> {
    let chi = superop_to_chi(&linear_inversion_superop(rec)?);
    let clamped = chi.eigen()?.reconstruct_with(|v| v.max(0.0));
    let tr = clamped.trace().re;
    if tr <= Tolerances::DEFAULT.zero_norm {
        return Err(Error::ZeroMatrix);
    }
    ChiMatrix::new(clamped.scale_real(1.0 / tr).hermitian_part())
}

pub fn cptp_project_qpt(rec: &TomographyRecord) -> Result<ChiMatrix> {
    Ok(cptp_project_qpt_detailed(rec)?.chi)
}

pub fn cptp_project_qpt_detailed(rec: &TomographyRecord) -> Result<CptpFit> {
    let tol = Tolerances::DEFAULT;
    let ins: Vec<CMatrix> = rec.inputs().iter().map(|d| d.matrix().clone()).collect();
    let p = stacked(&ins);
    let sigma = stacked(rec.outputs());
    let p_adj = p.adjoint();
    let lipschitz = 2.0 * eig_hermitian(&gram(rec.inputs()))?.max();
    if lipschitz <= 0.0 {
        return Err(Error::SingularSystem {
            condition: f64::INFINITY,
        });
    }

    let start = match linear_inversion_superop(rec) {
        Ok(s) => reshuffle(s.matrix()).hermitian_part(),
        Err(e) if matches!(e, Error::SingularSystem { .. }) => {
            CMatrix::identity(SYSTEM_DIM * SYSTEM_DIM).scale_real(1.0 / SYSTEM_DIM as f64)
        }
        Err(e) => return Err(e),
    };
    let mut r = project_cptp(&start)?;
    let mut f = objective(&r, &p, &sigma);
    let mut y = r.clone();
    let mut momentum = 1.0_f64;
    let mut residual = f64::INFINITY;

    for it in 1..=tol.max_cptp_iterations {
        let resid = &(&reshuffle(&y) * &p) - &sigma;
        let grad = reshuffle(&(&resid * &p_adj).scale_real(2.0));
        let r_new = project_cptp(&(&y - &grad.scale_real(1.0 / lipschitz)).hermitian_part())?;
        let f_new = objective(&r_new, &p, &sigma);
        if f_new > f && momentum > 1.0 {
            // Momentum overshot: restart from the last iterate.
            momentum = 1.0;
            y = r.clone();
            continue;
        }
        let next = (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt()) / 2.0;
        y = &r_new + &(&r_new - &r).scale_real((momentum - 1.0) / next);
        momentum = next;

        let change = (f_new - f).abs();
        r = r_new;
        f = f_new;
        residual = change / f.max(f64::MIN_POSITIVE);
        if change > tol.cptp_objective_change * f + OBJECTIVE_FLOOR {
            continue;
        }
        let min_eig = eig_hermitian(&r)?.min() / SYSTEM_DIM as f64;
        let violation = tp_defect(&r).max(-min_eig);
        residual = residual.max(violation);
        if violation < tol.cptp_violation {
            let chi = choi_to_chi(&r);
            return Ok(CptpFit {
                objective: f,
                iterations: it,
                tp_defect: chi.tp_defect(),
                min_eigenvalue: chi.eigen()?.min(),
                chi,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_cptp_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{dephasing_generator, process_fidelity, DephasingParams};
    use crate::tomography::{add_record_noise, linear_inversion_qpt, qpt_objective, InputBasis};

    fn dephasing_record() -> (TomographyRecord, ChiMatrix) {
        let p = DephasingParams::default();
        let s = dephasing_generator(&p).exp(p.t);
        let rec = TomographyRecord::from_channel(&InputBasis::new(), |r| Ok(s.apply(r.matrix()))).unwrap();
        (rec, superop_to_chi(&s))
    }

    #[test]
    fn tp_projection_is_exact() {
        let r = CMatrix::from_fn(16, 16, |i, j| crate::linalg::C64::new((i * j) as f64 * 0.01, 0.0)).hermitian_part();
        assert!(tp_defect(&project_tp(&r)) < 1e-14);
    }

    #[test]
    fn noiseless_matches_linear_inversion() {
        let (rec, truth) = dephasing_record();
        let fit = cptp_project_qpt_detailed(&rec).unwrap();
        let li = linear_inversion_qpt(&rec).unwrap();
        assert!(fit.chi.matrix().distance(li.matrix()) < 1e-6);
        assert!(process_fidelity(&fit.chi, &truth).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn noisy_fit_is_physical() {
        let (rec, truth) = dephasing_record();
        let noisy = add_record_noise(&rec, 0.01, 42);
        let fit = cptp_project_qpt_detailed(&noisy).unwrap();
        assert!(fit.min_eigenvalue >= -1e-10, "{}", fit.min_eigenvalue);
        assert!(fit.tp_defect <= 1e-8);
        assert!(process_fidelity(&fit.chi, &truth).unwrap() >= 0.99);
        assert!((qpt_objective(&noisy, &fit.chi) - fit.objective).abs() < 1e-9);
    }

    #[test]
    fn zero_outputs_still_feasible() {
        let (rec, _) = dephasing_record();
        let zeros = rec.with_outputs(vec![CMatrix::zeros(4, 4); 16]);
        let fit = cptp_project_qpt_detailed(&zeros).unwrap();
        assert!(fit.min_eigenvalue >= -1e-10);
        assert!(fit.tp_defect <= 1e-8);
    }
}
