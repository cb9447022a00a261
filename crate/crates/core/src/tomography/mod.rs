//! Process tomography over the 16-state product basis.

mod cptp;
mod linear;
mod noise;

use serde::{Deserialize, Serialize};

use crate::channel::{DensityMatrix, StateVector, SYSTEM_DIM};
use crate::error::{Error, Result};
use crate::linalg::{condition_number_psd, kron_vec, CMatrix, C64};

pub use cptp::{cptp_project_qpt, cptp_project_qpt_detailed, clamped_linear_estimate, CptpFit};
pub use linear::{linear_inversion_qpt, linear_inversion_superop, qpt_objective};
pub use noise::{add_measurement_noise, add_record_noise};

const SINGLE_LABELS: [&str; 4] = ["0", "1", "+", "-"];

/// Single-qubit states `|0⟩, |1⟩, |+⟩ = (|0⟩+|1⟩)/√2, |−⟩ = (|0⟩+i|1⟩)/√2`.
pub fn single_qubit_states() -> [Vec<C64>; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(r, 0.0), C64::new(r, 0.0)],
        vec![C64::new(r, 0.0), C64::new(0.0, r)],
    ]
}

/// The 16 product states `s_a ⊗ s_b`, index `4a + b`, first factor on qubit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct InputBasis {
    states: Vec<StateVector>,
    labels: Vec<String>,
}

impl InputBasis {
    pub fn new() -> Self {
        let single = single_qubit_states();
        let mut states = Vec::with_capacity(16);
        let mut labels = Vec::with_capacity(16);
        for a in 0..4 {
            for b in 0..4 {
                let v = kron_vec(&single[a], &single[b]);
                states.push(StateVector::new(v).expect("product of normalized states"));
                labels.push(format!("{}{}", SINGLE_LABELS[a], SINGLE_LABELS[b]));
            }
        }
        InputBasis { states, labels }
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// Labels such as `"0+"` or `"-1"`.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn density_matrices(&self) -> Vec<DensityMatrix> {
        self.states.iter().map(DensityMatrix::from_pure).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Condition number of the Gram matrix of the vectorized projectors.
    pub fn gram_condition(&self) -> Result<f64> {
        let inputs = self.density_matrices();
        condition_number_psd(&gram(&inputs))
    }
}

impl Default for InputBasis {
    fn default() -> Self {
        Self::new()
    }
}

pub fn input_basis() -> InputBasis {
    InputBasis::new()
}

/// Matrix whose column `k` is `vec(ρ_k)`.
pub(crate) fn stacked(ms: &[CMatrix]) -> CMatrix {
    let n = SYSTEM_DIM * SYSTEM_DIM;
    let mut p = CMatrix::zeros(n, ms.len());
    for (k, m) in ms.iter().enumerate() {
        p.set_col(k, &m.vec_row_major());
    }
    p
}

/// `P P†` for the vectorized inputs.
pub(crate) fn gram(inputs: &[DensityMatrix]) -> CMatrix {
    let ms: Vec<CMatrix> = inputs.iter().map(|d| d.matrix().clone()).collect();
    let p = stacked(&ms);
    (&p * &p.adjoint()).hermitian_part()
}

/// Input states with the corresponding (possibly noisy) output matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord", into = "RawRecord")]
pub struct TomographyRecord {
    inputs: Vec<DensityMatrix>,
    outputs: Vec<CMatrix>,
    pub noise_sigma: Option<f64>,
    pub seed: Option<u64>,
}

impl TomographyRecord {
    pub fn new(inputs: Vec<DensityMatrix>, outputs: Vec<CMatrix>) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::Data(format!(
                "{} inputs but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        if inputs.is_empty() {
            return Err(Error::Data("tomography record is empty".into()));
        }
        for (k, (i, o)) in inputs.iter().zip(&outputs).enumerate() {
            if i.dim() != SYSTEM_DIM || o.dims() != (SYSTEM_DIM, SYSTEM_DIM) {
                return Err(Error::Dimension(format!("record entry {k} is not two-qubit")));
            }
        }
        Ok(TomographyRecord {
            inputs,
            outputs,
            noise_sigma: None,
            seed: None,
        })
    }

    /// Record of the basis states sent through `channel`.
    pub fn from_channel(
        basis: &InputBasis,
        channel: impl Fn(&DensityMatrix) -> Result<CMatrix>,
    ) -> Result<Self> {
        let inputs = basis.density_matrices();
        let outputs = inputs.iter().map(&channel).collect::<Result<Vec<_>>>()?;
        Self::new(inputs, outputs)
    }

    pub fn inputs(&self) -> &[DensityMatrix] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[CMatrix] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub(crate) fn with_outputs(&self, outputs: Vec<CMatrix>) -> Self {
        TomographyRecord {
            inputs: self.inputs.clone(),
            outputs,
            noise_sigma: self.noise_sigma,
            seed: self.seed,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    #[serde(with = "crate::io::matrix_list")]
    inputs: Vec<CMatrix>,
    #[serde(with = "crate::io::matrix_list")]
    outputs: Vec<CMatrix>,
    noise_sigma: Option<f64>,
    seed: Option<u64>,
}

impl TryFrom<RawRecord> for TomographyRecord {
    type Error = Error;

    fn try_from(raw: RawRecord) -> Result<Self> {
        let inputs = raw
            .inputs
            .into_iter()
            .map(DensityMatrix::new)
            .collect::<Result<Vec<_>>>()?;
        let mut rec = TomographyRecord::new(inputs, raw.outputs)?;
        rec.noise_sigma = raw.noise_sigma;
        rec.seed = raw.seed;
        Ok(rec)
    }
}

impl From<TomographyRecord> for RawRecord {
    fn from(r: TomographyRecord) -> Self {
        RawRecord {
            inputs: r.inputs.into_iter().map(DensityMatrix::into_matrix).collect(),
            outputs: r.outputs,
            noise_sigma: r.noise_sigma,
            seed: r.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_order_and_elements() {
        let b = InputBasis::new();
        assert_eq!(b.len(), 16);
        assert_eq!(b.labels()[0], "00");
        assert_eq!(b.labels()[3], "0-");
        assert_eq!(b.labels()[15], "--");
        let rho = b.density_matrices();
        assert!(rho[0].matrix().approx_eq(&CMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]), 1e-15));
        assert!((rho[2].matrix()[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((rho[3].matrix()[(0, 1)] - C64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn record_json_round_trip() {
        let b = InputBasis::new();
        let mut rec = TomographyRecord::from_channel(&b, |r| Ok(r.matrix().clone())).unwrap();
        rec.noise_sigma = Some(0.01);
        rec.seed = Some(42);
        let text = serde_json::to_string(&rec).unwrap();
        let back: TomographyRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn record_rejects_mismatch() {
        let b = InputBasis::new();
        assert!(TomographyRecord::new(b.density_matrices(), vec![]).is_err());
    }
}
