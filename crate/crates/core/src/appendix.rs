//! Published reference data compiled into the library: the two printed
//! Kraus sets, their gate strings and angle tables, and the hardware
//! measurements used only as display columns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{parse_product_string, Circuit};
use crate::io::kraus_from_json;
use crate::linalg::CMatrix;

macro_rules! data_file {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/", $name))
    };
}

const PHASE_DAMPING_KRAUS: &str = data_file!("phase_damping_kraus.json");
const MFGP_KRAUS: &str = data_file!("mfgp_kraus.json");
const CIRCUITS: &str = data_file!("appendix_circuits.json");
const MFGP_ANGLES: &str = data_file!("mfgp_angles.csv");
const OVERLAPS_PHASE_DAMPING: &str = data_file!("hardware_overlaps_phase_damping.csv");
const OVERLAPS_MFGP: &str = data_file!("hardware_overlaps_mfgp.csv");
const FIDELITIES_PHASE_DAMPING: &str = data_file!("hardware_fidelities_phase_damping.csv");
const FIDELITIES_MFGP: &str = data_file!("hardware_fidelities_mfgp.csv");

/// Label attached to every hardware-measured value.
pub const HARDWARE_SOURCE: &str = "paper-experiment";

/// Measured process fidelities, reference only.
pub const HARDWARE_PROCESS_FIDELITY_PHASE_DAMPING: f64 = 0.9148;
pub const HARDWARE_PROCESS_FIDELITY_MFGP: f64 = 0.8824;

/// CNOT counts of the published phase-damping circuits, `U_A1..U_A4`.
pub const PUBLISHED_CNOTS_PHASE_DAMPING: [usize; 4] = [8, 3, 3, 0];
/// CNOTs per dilation in the gradient-pulse template.
pub const PUBLISHED_CNOTS_MFGP: usize = 9;
pub const PUBLISHED_ROTATIONS_MFGP: usize = 18;

/// `θ₁` of `U_A1` as printed in the gate list.
pub const PUBLISHED_THETA1_A1: f64 = 0.5870;
/// The same angle given in the circuit figure as `0.3737·π/2`.
pub const FIGURE_THETA1_A1: f64 = 0.3737 * std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    PhaseDamping,
    Mfgp,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::PhaseDamping => "phase-damping",
            Experiment::Mfgp => "mfgp",
        }
    }

    pub fn hardware_process_fidelity(self) -> f64 {
        match self {
            Experiment::PhaseDamping => HARDWARE_PROCESS_FIDELITY_PHASE_DAMPING,
            Experiment::Mfgp => HARDWARE_PROCESS_FIDELITY_MFGP,
        }
    }
}

/// Printed phase-damping Kraus operators, four decimals.
pub fn phase_damping_kraus() -> Vec<CMatrix> {
    kraus_from_json(PHASE_DAMPING_KRAUS).expect("bundled phase-damping Kraus data")
}

/// Printed gradient-pulse Kraus operators, verbatim (not renormalized).
pub fn mfgp_kraus() -> Vec<CMatrix> {
    kraus_from_json(MFGP_KRAUS).expect("bundled gradient-pulse Kraus data")
}

/// Raw JSON of the bundled gradient-pulse Kraus file.
pub fn mfgp_kraus_json() -> &'static str {
    MFGP_KRAUS
}

/// One published gate string with its angle bindings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixCircuit {
    pub name: String,
    pub kraus_index: usize,
    /// Right-to-left product as printed.
    pub product: String,
    pub params: BTreeMap<String, f64>,
}

impl AppendixCircuit {
    pub fn circuit(&self) -> Result<Circuit> {
        parse_product_string(&self.product, &self.params)
    }
}

#[derive(Deserialize)]
struct CircuitsFile {
    phase_damping: Vec<AppendixCircuit>,
    mfgp_template: String,
}

fn circuits_file() -> CircuitsFile {
    serde_json::from_str(CIRCUITS).expect("bundled circuit data")
}

pub fn phase_damping_circuits() -> Vec<AppendixCircuit> {
    circuits_file().phase_damping
}

/// The common gradient-pulse template with parameters `t0..t17`.
pub fn mfgp_template() -> String {
    circuits_file().mfgp_template
}

/// Angle table for the template: one map `t0..t17` per dilation `U_A1..U_A4`.
pub fn mfgp_angles() -> Result<Vec<(String, BTreeMap<String, f64>)>> {
    let mut rdr = csv::Reader::from_reader(MFGP_ANGLES.as_bytes());
    let names: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_owned).collect();
    let mut columns: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new(); names.len()];
    for row in rdr.records() {
        let row = row?;
        let key = row.get(0).ok_or_else(|| Error::Data("empty angle row".into()))?;
        for (j, col) in columns.iter_mut().enumerate() {
            let cell = row.get(j + 1).unwrap_or("");
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| Error::Data(format!("bad angle '{cell}' for {key}")))?;
            col.insert(key.to_owned(), v);
        }
    }
    Ok(names.into_iter().zip(columns).collect())
}

/// Template instantiated with each column of the angle table.
pub fn mfgp_circuits() -> Result<Vec<AppendixCircuit>> {
    let template = mfgp_template();
    Ok(mfgp_angles()?
        .into_iter()
        .enumerate()
        .map(|(k, (name, params))| AppendixCircuit {
            name,
            kraus_index: k,
            product: template.clone(),
            params,
        })
        .collect())
}

/// A per-state table of hardware values, rows in input-basis order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub source: String,
    pub columns: Vec<String>,
    pub states: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl ReferenceTable {
    fn parse(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let columns: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_owned).collect();
        let mut states = Vec::new();
        let mut values = Vec::new();
        for row in rdr.records() {
            let row = row?;
            states.push(row.get(0).unwrap_or("").to_owned());
            let vals = row
                .iter()
                .skip(1)
                .map(|c| c.trim().parse::<f64>().map_err(|_| Error::Data(format!("bad value '{c}'"))))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != columns.len() {
                return Err(Error::Data("ragged reference table".into()));
            }
            values.push(vals);
        }
        Ok(ReferenceTable {
            source: HARDWARE_SOURCE.into(),
            columns,
            states,
            values,
        })
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }
}

/// Measured per-state, per-Kraus overlaps.
pub fn hardware_overlaps(e: Experiment) -> ReferenceTable {
    let text = match e {
        Experiment::PhaseDamping => OVERLAPS_PHASE_DAMPING,
        Experiment::Mfgp => OVERLAPS_MFGP,
    };
    ReferenceTable::parse(text).expect("bundled overlap table")
}

/// Measured per-state output fidelities.
pub fn hardware_fidelities(e: Experiment) -> ReferenceTable {
    let text = match e {
        Experiment::PhaseDamping => FIDELITIES_PHASE_DAMPING,
        Experiment::Mfgp => FIDELITIES_MFGP,
    };
    ReferenceTable::parse(text).expect("bundled fidelity table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausSet;
    use crate::tomography::InputBasis;

    #[test]
    fn kraus_sets_load() {
        let pd = phase_damping_kraus();
        let mf = mfgp_kraus();
        assert_eq!((pd.len(), mf.len()), (4, 4));
        assert!(pd.iter().chain(&mf).all(|a| a.dims() == (4, 4)));
        assert!(KrausSet::experimental(mf).is_ok());
    }

    #[test]
    fn published_counts_match_strings() {
        let pd: Vec<usize> = phase_damping_circuits()
            .iter()
            .map(|c| c.circuit().unwrap().cnot_count())
            .collect();
        assert_eq!(pd, PUBLISHED_CNOTS_PHASE_DAMPING);
        for c in mfgp_circuits().unwrap() {
            let circ = c.circuit().unwrap();
            assert_eq!(circ.cnot_count(), PUBLISHED_CNOTS_MFGP);
            assert_eq!(circ.rotation_count(), PUBLISHED_ROTATIONS_MFGP);
            assert_eq!(circ.len(), 27);
        }
    }

    #[test]
    fn angle_table_columns() {
        let a = mfgp_angles().unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a[1].0, "U_A2");
        assert_eq!(a[1].1["t0"], 4.7124);
        assert_eq!(a[1].1["t17"], 2.1115);
        assert_eq!(a[0].1["t17"], 2.9373);
        assert!(a.iter().all(|(_, m)| m.len() == 18));
    }

    #[test]
    fn figure_angle_agrees_with_gate_list() {
        assert!((FIGURE_THETA1_A1 - PUBLISHED_THETA1_A1).abs() < 1e-4);
        let a1 = &phase_damping_circuits()[0];
        assert_eq!(a1.params["t1"], PUBLISHED_THETA1_A1);
    }

    #[test]
    fn reference_tables_follow_basis_order() {
        let labels = InputBasis::new().labels().to_vec();
        for e in [Experiment::PhaseDamping, Experiment::Mfgp] {
            let o = hardware_overlaps(e);
            let f = hardware_fidelities(e);
            assert_eq!(o.states, labels);
            assert_eq!(f.states, labels);
            assert_eq!(o.columns, ["A1", "A2", "A3", "A4"]);
            assert_eq!(o.source, HARDWARE_SOURCE);
        }
        assert_eq!(hardware_fidelities(Experiment::PhaseDamping).values[0][0], 0.9936);
    }
}
