//! Dense complex linear algebra for the small matrices used in this crate.

mod eig;
mod funcs;
mod matrix;

pub use eig::{eig_hermitian, eig_hermitian_with, HermitianEig};
pub use funcs::{
    condition_number_psd, expm, inv_sqrtm_pd, inverse, operator_norm, orthonormal_columns, qr,
    solve, sqrtm_psd, sqrtm_psd_with,
};
pub use matrix::{kron, kron_vec, vdot, vec_norm, CMatrix, C64, I, ONE, ZERO};
