//! Seeded random matrices and states for tests and noise models.
//!
//! Everything draws from a caller-supplied RNG; use [`rng`] to get a
//! ChaCha stream that is reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{operator_norm, qr, vec_norm, CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Gaussian with `E|z|² = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, 1.0))
}

/// Haar-distributed unitary (QR of a Ginibre matrix, diagonal of R made positive).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    qr(&gaussian_matrix(rng, n, n)).0
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng, 1.0)).collect();
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Random matrix rescaled to a uniformly drawn operator norm in `(0, 1]`.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let target: f64 = 1.0 - rng.random::<f64>();
    g.scale_real(target / operator_norm(&g))
}

/// Kraus operators of a random CPTP map: `count` blocks of a random isometry.
pub fn kraus_operators<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<CMatrix> {
    let (iso, _) = qr(&gaussian_matrix(rng, dim * count, dim));
    (0..count).map(|k| iso.block(k * dim, 0, dim, dim)).collect()
}

/// Derives an independent seed for sub-stream `stream` of `seed` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
