//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! The matrices in this crate are at most 16×16, so a plain cyclic sweep
//! order is used: it is deterministic and accurate to a few ulps.

use std::cmp::Ordering;

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Eigenvalues (descending) and column eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.col(k)
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

pub fn eig_hermitian(h: &CMatrix) -> Result<HermitianEig> {
    eig_hermitian_with(h, &Tolerances::DEFAULT)
}

pub fn eig_hermitian_with(h: &CMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian { defect });
    }

    let n = h.rows();
    let herm = h.hermitian_part();
    // Row-major working copy; `vt` holds the eigenvector matrix transposed
    // so each column update touches a contiguous row.
    let mut a: Vec<C64> = herm.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let mut vt: Vec<C64> = CMatrix::identity(n).into_vec();
    let scale = herm.frobenius_norm().max(f64::MIN_POSITIVE);
    // Off-diagonal entries below this floor are set to zero.
    let floor = f64::EPSILON * 1e-3 * scale;

    let mut residual = max_off_diagonal(&a, n);
    let mut sweeps = 0;
    while residual > floor {
        if sweeps == tol.max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut vt, n, p, q, floor);
            }
        }
        sweeps += 1;
        residual = max_off_diagonal(&a, n);
    }

    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let v = CMatrix::from_fn(n, n, |i, j| vt[j * n + i]);
    Ok(sorted(values, v))
}

fn max_off_diagonal(a: &[C64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max(a[i * n + j].norm());
        }
    }
    worst
}

/// One Jacobi rotation annihilating `a[p, q]` of the Hermitian row-major `a`.
fn rotate(a: &mut [C64], vt: &mut [C64], n: usize, p: usize, q: usize, floor: f64) {
    let b = a[p * n + q];
    let beta = b.norm();
    if beta <= floor {
        a[p * n + q] = ZERO;
        a[q * n + p] = ZERO;
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = b / beta;
    let theta = (aqq - app) / (2.0 * beta);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // V = diag(1, e^{-iφ}) [[c, s], [-s, c]]
    let ph = phase.conj();
    let v00 = C64::new(c, 0.0);
    let v01 = C64::new(s, 0.0);
    let v10 = ph * (-s);
    let v11 = ph * c;
    let (w00, w01, w10, w11) = (v00.conj(), v01.conj(), v10.conj(), v11.conj());

    // Rows p and q of V†A; columns follow by Hermitian symmetry.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        let np = w00 * apk + w10 * aqk;
        let nq = w01 * apk + w11 * aqk;
        a[p * n + k] = np;
        a[q * n + k] = nq;
        a[k * n + p] = np.conj();
        a[k * n + q] = nq.conj();
    }
    // The 2×2 pivot block becomes diagonal.
    let (bpp, bpq, bqq) = (C64::new(app, 0.0), b, C64::new(aqq, 0.0));
    let bqp = b.conj();
    let m00 = w00 * (bpp * v00 + bpq * v10) + w10 * (bqp * v00 + bqq * v10);
    let m11 = w01 * (bpp * v01 + bpq * v11) + w11 * (bqp * v01 + bqq * v11);
    a[p * n + p] = C64::new(m00.re, 0.0);
    a[q * n + q] = C64::new(m11.re, 0.0);
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;

    for k in 0..n {
        let vkp = vt[p * n + k];
        let vkq = vt[q * n + k];
        vt[p * n + k] = vkp * v00 + vkq * v10;
        vt[q * n + k] = vkp * v01 + vkq * v11;
    }
}

/// Rotates `vec` so its first significant component is real and positive.
fn phase_normalize(vec: &mut [C64]) {
    let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if let Some(lead) = vec.iter().find(|z| z.norm() > 1e-10 * norm.max(1e-300)) {
        let ph = lead.conj() / lead.norm();
        for z in vec.iter_mut() {
            *z *= ph;
        }
    }
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    // Larger leading components first; exact ties are broken by position.
    for (x, y) in a.iter().zip(b) {
        let ord = round(y.re)
            .total_cmp(&round(x.re))
            .then(round(y.im).total_cmp(&round(x.im)));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn round(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// Descending eigenvalues; ties broken by the phase-normalized eigenvector.
fn sorted(values: Vec<f64>, v: CMatrix) -> HermitianEig {
    let n = values.len();
    let mut cols: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut c = v.col(k);
            phase_normalize(&mut c);
            (values[k], c)
        })
        .collect();
    cols.sort_by(|x, y| y.0.total_cmp(&x.0));

    let scale = values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tie = 1e-12 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cols[end - 1].0 - cols[end].0).abs() <= tie {
            end += 1;
        }
        cols[start..end].sort_by(|x, y| lexicographic(&x.1, &y.1));
        start = end;
    }

    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, c)) in cols.iter().enumerate() {
        vectors.set_col(k, c);
    }
    HermitianEig {
        values: cols.into_iter().map(|(x, _)| x).collect(),
        vectors,
    }
}
