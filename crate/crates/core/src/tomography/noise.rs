use super::TomographyRecord;
use crate::linalg::CMatrix;
use crate::random::{complex_gaussian, derive_seed, rng};

/// `h + (G + G†)/2`, `G` with i.i.d. complex Gaussian entries, `E|g|² = σ²`.
pub fn add_measurement_noise(h: &CMatrix, sigma: f64, seed: u64) -> CMatrix {
    assert!(sigma >= 0.0 && sigma.is_finite(), "noise sigma must be finite and >= 0");
    if sigma == 0.0 {
        return h.clone();
    }
    let mut r = rng(seed);
    let g = CMatrix::from_fn(h.rows(), h.cols(), |_, _| complex_gaussian(&mut r, sigma * sigma));
    let herm = (&g + &g.adjoint()).scale_real(0.5);
    h + &herm
}

/// Perturbs every output of a record, output `k` using sub-seed `k` of `seed`.
pub fn add_record_noise(rec: &TomographyRecord, sigma: f64, seed: u64) -> TomographyRecord {
    let outputs = rec
        .outputs()
        .iter()
        .enumerate()
        .map(|(k, o)| add_measurement_noise(o, sigma, derive_seed(seed, k as u64)))
        .collect();
    let mut out = rec.with_outputs(outputs);
    out.noise_sigma = Some(sigma);
    out.seed = Some(seed);
    out
}
