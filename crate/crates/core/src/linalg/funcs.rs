use super::eig::eig_hermitian_with;
use super::matrix::{vdot, vec_norm, CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero; anything more
/// negative is rejected.
pub fn sqrtm_psd(m: &CMatrix) -> Result<CMatrix> {
    sqrtm_psd_with(m, &Tolerances::DEFAULT)
}

pub fn sqrtm_psd_with(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let e = eig_hermitian_with(m, tol)?;
    if e.min() < -tol.psd_clamp {
        return Err(Error::NotPsd {
            min_eigenvalue: e.min(),
        });
    }
    Ok(e.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// `m^{-1/2}` for a Hermitian positive definite matrix.
pub fn inv_sqrtm_pd(m: &CMatrix) -> Result<CMatrix> {
    let e = eig_hermitian_with(m, &Tolerances::DEFAULT)?;
    if e.min() <= 0.0 {
        return Err(Error::NotPsd {
            min_eigenvalue: e.min(),
        });
    }
    Ok(e.reconstruct_with(|x| 1.0 / x.sqrt()))
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    let gram = (&a.adjoint() * a).hermitian_part();
    // a†a is Hermitian by construction, so this cannot fail on the check.
    let e = eig_hermitian_with(&gram, &Tolerances::DEFAULT)
        .expect("Gram matrix is Hermitian");
    e.max().max(0.0).sqrt()
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.rows();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if norm1 == 0.0 {
        return CMatrix::identity(n);
    }
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale_real(0.5_f64.powi(squarings as i32));
    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        result = &result + &term;
        if term.max_abs() <= 1e-18 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Solves `a x = b` by LU factorization with partial pivoting.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: {:?} against {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if lu[(pivot, k)].norm() <= f64::EPSILON * scale * n as f64 {
            return Err(Error::SingularSystem {
                condition: f64::INFINITY,
            });
        }
        if pivot != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(pivot, j)];
                x[(pivot, j)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..x.cols() {
                let v = x[(k, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows()))
}

/// Condition number of a Hermitian positive semidefinite matrix.
pub fn condition_number_psd(m: &CMatrix) -> Result<f64> {
    let e = eig_hermitian_with(m, &Tolerances::DEFAULT)?;
    if e.min() <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(e.max() / e.min())
}

/// Thin QR by modified Gram–Schmidt with one reorthogonalization pass.
/// `R` has a real non-negative diagonal.
pub fn qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = a.dims();
    assert!(m >= n, "qr needs rows >= cols");
    let mut q = CMatrix::zeros(m, n);
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = a.col(j);
        for _pass in 0..2 {
            for k in 0..j {
                let qk = q.col(k);
                let c = vdot(&qk, &v);
                r[(k, j)] += c;
                for (x, y) in v.iter_mut().zip(&qk) {
                    *x -= c * y;
                }
            }
        }
        let norm = vec_norm(&v);
        r[(j, j)] = C64::new(norm, 0.0);
        if norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
        q.set_col(j, &v);
    }
    (q, r)
}

/// Orthonormalizes candidate columns in the given priority order.
///
/// Each candidate is projected against the columns already accepted; if
/// nothing usable survives (or the candidate is `None`) the slot is filled
/// from the standard basis instead.
pub fn orthonormal_columns(n: usize, candidates: &[Option<Vec<C64>>], order: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(n, candidates.len());
    let mut accepted: Vec<Vec<C64>> = Vec::new();
    let mut filled = vec![false; candidates.len()];

    let project_out = |v: &mut Vec<C64>, basis: &[Vec<C64>]| {
        for _pass in 0..2 {
            for b in basis {
                let c = vdot(b, v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
    };

    for &slot in order {
        if let Some(cand) = &candidates[slot] {
            let before = vec_norm(cand);
            let mut v = cand.clone();
            project_out(&mut v, &accepted);
            let after = vec_norm(&v);
            if before > 0.0 && after > 1e-6 * before {
                for x in v.iter_mut() {
                    *x /= after;
                }
                out.set_col(slot, &v);
                accepted.push(v);
                filled[slot] = true;
            }
        }
    }
    for slot in 0..candidates.len() {
        if filled[slot] {
            continue;
        }
        let mut best: Option<Vec<C64>> = None;
        let mut best_norm = 0.0;
        for k in 0..n {
            let mut e = vec![ZERO; n];
            e[k] = ONE;
            project_out(&mut e, &accepted);
            let norm = vec_norm(&e);
            if norm > best_norm + 1e-12 {
                best_norm = norm;
                best = Some(e);
            }
        }
        let mut v = best.expect("fewer columns than the dimension");
        for x in v.iter_mut() {
            *x /= best_norm;
        }
        out.set_col(slot, &v);
        accepted.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        assert!(sqrtm_psd(&CMatrix::identity(4)).unwrap().approx_eq(&CMatrix::identity(4), 1e-15));
        let s = sqrtm_psd(&CMatrix::from_real_diag(&[4.0, 1.0])).unwrap();
        assert!(s.approx_eq(&CMatrix::from_real_diag(&[2.0, 1.0]), 1e-15));
    }

    #[test]
    fn sqrt_rejects_negative_and_clamps_tiny() {
        let m = CMatrix::from_real_diag(&[1.0, -1e-3]);
        assert!(matches!(sqrtm_psd(&m), Err(Error::NotPsd { .. })));
        let m = CMatrix::from_real_diag(&[1.0, -1e-10]);
        let s = sqrtm_psd(&m).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
    }

    #[test]
    fn operator_norms() {
        assert!((operator_norm(&CMatrix::identity(4)) - 1.0).abs() < 1e-15);
        let half_x = CMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        assert!((operator_norm(&half_x) - 0.5).abs() < 1e-15);
        let nilpotent = CMatrix::from_real(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        assert!((operator_norm(&nilpotent) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn expm_of_diagonal_and_rotation_generator() {
        let d = CMatrix::from_real_diag(&[0.0, -1.0, -2.8]);
        let e = expm(&d);
        assert!((e[(1, 1)].re - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e[(2, 2)].re - (-2.8f64).exp()).abs() < 1e-15);
        // exp(-i θ X / 2) with θ = π is -iX.
        let gen = CMatrix::from_vec(2, 2, vec![ZERO, -I, -I, ZERO]).scale_real(std::f64::consts::PI / 2.0);
        let r = expm(&gen);
        assert!(r.approx_eq(&CMatrix::from_vec(2, 2, vec![ZERO, -I, -I, ZERO]), 1e-14));
    }

    #[test]
    fn solve_recovers_inverse() {
        let a = CMatrix::from_vec(2, 2, vec![ZERO, ONE, C64::new(2.0, 1.0), ONE]);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).approx_eq(&CMatrix::identity(2), 1e-15));
        let singular = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(inverse(&singular), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn qr_factors() {
        let a = CMatrix::from_vec(3, 2, vec![ONE, I, ONE, ZERO, C64::new(0.0, 2.0), ONE]);
        let (q, r) = qr(&a);
        assert!(q.unitarity_defect() < 1e-14);
        assert!((&q * &r).approx_eq(&a, 1e-14));
    }

    #[test]
    fn completion_fills_missing_slots() {
        let cands = vec![Some(vec![ONE, ONE]), None];
        let q = orthonormal_columns(2, &cands, &[0, 1]);
        assert!(q.unitarity_defect() < 1e-14);
    }
}
