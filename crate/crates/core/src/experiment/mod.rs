//! End-to-end runs behind the command-line verbs, and the reports they emit.

mod emit;
mod pipeline;

use serde::{Deserialize, Serialize};

use crate::appendix::ReferenceTable;
use crate::channel::{ChiMatrix, DephasingParams};
use crate::error::{Error, Result};
use crate::gates::{ConventionDistance, GateCounts, RotationConvention};
use crate::tolerances::Tolerances;

pub use emit::{emit_appendix_report, emit_report, write_channel};
pub use pipeline::{
    gen_channel, prepare_experimental_set, reproduce_mfgp, reproduce_phase_damping, run_pipeline,
    verify_appendix, GeneratedChannel,
};

/// Every knob of a run. Serialized verbatim into each report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    pub t: f64,
    pub seed: u64,
    pub noise_sigma: f64,
    pub renormalize_kraus: bool,
    #[serde(with = "convention_id")]
    pub convention: RotationConvention,
    pub out_dir: Option<String>,
    pub kraus_file: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = DephasingParams::default();
        RunConfig {
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            t: p.t,
            seed: 42,
            noise_sigma: 0.0,
            renormalize_kraus: false,
            convention: RotationConvention::NATIVE,
            out_dir: None,
            kraus_file: None,
        }
    }
}

impl RunConfig {
    pub fn dephasing(&self) -> Result<DephasingParams> {
        DephasingParams::new(self.gamma1, self.gamma2, self.t)
    }

    pub fn validate(&self) -> Result<()> {
        self.dephasing()?;
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Data(format!(
                "noise sigma must be finite and non-negative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }
}

mod convention_id {
    use super::RotationConvention;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &RotationConvention, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(c.id())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RotationConvention, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Real and imaginary parts of a matrix as nested row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexArrays {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ChiMatrix> for ComplexArrays {
    fn from(chi: &ChiMatrix) -> Self {
        let m = chi.matrix();
        let rows = |f: fn(&crate::linalg::C64) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        ComplexArrays {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSummary {
    pub source: String,
    pub count: usize,
    pub operator_norms: Vec<f64>,
    /// Defect of the set as loaded.
    pub input_completeness_defect: f64,
    /// Defect of the set actually dilated.
    pub completeness_defect: f64,
    pub renormalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationSummary {
    pub kraus_index: usize,
    pub counts: GateCounts,
    pub unitarity_defect: f64,
    /// Phase distance between the compiled circuit and the dilation.
    pub rebuild_distance: f64,
    /// Gate list in the native text format, under the run's convention.
    pub gate_list: String,
}

/// Hardware measurements shown next to simulated values; never asserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareReference {
    pub source: String,
    pub process_fidelity: f64,
    pub per_state_overlaps: ReferenceTable,
    pub per_state_fidelities: ReferenceTable,
    pub published_cnots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub config: RunConfig,
    pub tolerances: Tolerances,
    pub qpt_method: String,
    pub states: Vec<String>,
    pub kraus: KrausSummary,
    /// `[state][kraus]` overlap of the simulated branch with `A ρ A†`.
    pub per_state_overlaps: Vec<Vec<f64>>,
    /// Overlap of the reassembled output with the target channel's output.
    pub per_state_fidelities: Vec<f64>,
    pub process_fidelity: f64,
    pub chi_target: ComplexArrays,
    pub chi_simulated: ComplexArrays,
    pub chi_target_eigenvalues: Vec<f64>,
    pub chi_simulated_eigenvalues: Vec<f64>,
    pub gate_counts: Vec<DilationSummary>,
    pub reference: HardwareReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub counts: GateCounts,
    pub distance: f64,
}

/// Published gate list against the dilation of the published operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixEntry {
    pub set: String,
    pub name: String,
    pub kraus_index: usize,
    pub published_counts: GateCounts,
    pub distances: Vec<ConventionDistance>,
    pub best: ConventionDistance,
    pub selected_distance: f64,
    pub self_check: SelfCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleCheck {
    pub gate_list_value: f64,
    pub figure_value: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub version: String,
    pub config: RunConfig,
    pub tolerances: Tolerances,
    pub mfgp_renormalized: bool,
    pub entries: Vec<AppendixEntry>,
    pub theta1_check: AngleCheck,
}

impl AppendixReport {
    /// Largest self-check distance over all entries.
    pub fn worst_self_check(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.self_check.distance)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_json() {
        let c: RunConfig = serde_json::from_str(r#"{"gamma1": 2.0, "convention": "rev-same"}"#).unwrap();
        assert_eq!(c.gamma1, 2.0);
        assert_eq!(c.gamma2, 1.5);
        assert_eq!(c.convention.id(), "rev-same");
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        assert!(serde_json::from_str::<RunConfig>(r#"{"gama1": 2.0}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"convention": "odd"}"#).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.noise_sigma = -1.0;
        assert!(c.validate().is_err());
        c.noise_sigma = 0.0;
        c.t = -2.0;
        assert!(c.validate().is_err());
    }
}
