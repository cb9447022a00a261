//! Three-qubit gate IR: single-qubit rotations and CNOTs.
//!
//! Qubit 1 is the most significant bit of the basis index (and the ancilla
//! of a dilation). Circuits list gates in application order.

pub mod decompose;
pub mod text;
pub mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};

pub use decompose::decompose_unitary;
pub use text::{parse_gate_list, parse_product_string, serialize_gate_list};
pub use verify::{verify_gate_list, ConventionDistance, VerificationReport};

pub const NUM_QUBITS: usize = 3;
pub const DIM: usize = 1 << NUM_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
    XBar,
    YBar,
    ZBar,
}

impl Axis {
    pub fn is_bar(self) -> bool {
        matches!(self, Axis::XBar | Axis::YBar | Axis::ZBar)
    }

    /// 1, 2, 3 for x, y, z regardless of the bar.
    pub fn pauli_index(self) -> usize {
        match self {
            Axis::X | Axis::XBar => 1,
            Axis::Y | Axis::YBar => 2,
            Axis::Z | Axis::ZBar => 3,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::XBar => "x-",
            Axis::YBar => "y-",
            Axis::ZBar => "z-",
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            "x-" => Axis::XBar,
            "y-" => Axis::YBar,
            "z-" => Axis::ZBar,
            _ => return Err(format!("unknown axis '{s}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Rotation { qubit: usize, axis: Axis, theta: f64 },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn validate(&self) -> Result<()> {
        let in_range = |q: usize| (1..=NUM_QUBITS).contains(&q);
        match *self {
            Gate::Rotation { qubit, theta, .. } => {
                if !in_range(qubit) {
                    return Err(Error::Data(format!("rotation on qubit {qubit} out of range")));
                }
                if !theta.is_finite() {
                    return Err(Error::Data(format!("rotation angle {theta} is not finite")));
                }
            }
            Gate::Cnot { control, target } => {
                if !in_range(control) || !in_range(target) {
                    return Err(Error::Data(format!("CNOT {control} {target} out of range")));
                }
                if control == target {
                    return Err(Error::Data(format!("CNOT control equals target ({control})")));
                }
            }
        }
        Ok(())
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate()?;
        }
        Ok(Circuit {
            num_qubits: NUM_QUBITS,
            gates,
        })
    }

    pub fn empty() -> Self {
        Circuit {
            num_qubits: NUM_QUBITS,
            gates: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.len() - self.cnot_count()
    }

    pub fn counts(&self) -> GateCounts {
        GateCounts {
            cnot: self.cnot_count(),
            rotation: self.rotation_count(),
        }
    }

    /// Same unitary, with angles rewritten so the circuit reads correctly
    /// under `to` instead of `from`.
    pub fn reexpressed(&self, from: RotationConvention, to: RotationConvention) -> Circuit {
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Rotation { qubit, axis, theta } => Gate::Rotation {
                    qubit,
                    axis,
                    theta: theta * from.angle_factor(axis) * to.angle_factor(axis),
                },
                cnot => cnot,
            })
            .collect();
        Circuit {
            num_qubits: self.num_qubits,
            gates,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub rotation: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationSign {
    /// `R(θ) = exp(-iθ n·σ/2)`.
    Standard,
    /// `R(θ) = exp(+iθ n·σ/2)`.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarMeaning {
    /// `x̄` rotates about `-x`.
    NegatedAxis,
    /// `x̄` is the same rotation as `x`.
    SameAxis,
}

/// How rotation gates are turned into matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationConvention {
    pub sign: RotationSign,
    pub bar: BarMeaning,
}

impl RotationConvention {
    pub const NATIVE: RotationConvention = RotationConvention {
        sign: RotationSign::Standard,
        bar: BarMeaning::NegatedAxis,
    };

    pub fn all() -> [RotationConvention; 4] {
        use BarMeaning::*;
        use RotationSign::*;
        [
            RotationConvention { sign: Standard, bar: NegatedAxis },
            RotationConvention { sign: Standard, bar: SameAxis },
            RotationConvention { sign: Reversed, bar: NegatedAxis },
            RotationConvention { sign: Reversed, bar: SameAxis },
        ]
    }

    pub fn id(&self) -> &'static str {
        match (self.sign, self.bar) {
            (RotationSign::Standard, BarMeaning::NegatedAxis) => "std-neg",
            (RotationSign::Standard, BarMeaning::SameAxis) => "std-same",
            (RotationSign::Reversed, BarMeaning::NegatedAxis) => "rev-neg",
            (RotationSign::Reversed, BarMeaning::SameAxis) => "rev-same",
        }
    }

    /// Multiplier applied to θ before `exp(-iθ n·σ/2)` with the unbarred axis.
    fn angle_factor(&self, axis: Axis) -> f64 {
        let s = match self.sign {
            RotationSign::Standard => 1.0,
            RotationSign::Reversed => -1.0,
        };
        let b = if axis.is_bar() && self.bar == BarMeaning::NegatedAxis {
            -1.0
        } else {
            1.0
        };
        s * b
    }
}

impl Default for RotationConvention {
    fn default() -> Self {
        Self::NATIVE
    }
}

impl fmt::Display for RotationConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RotationConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "native" {
            return Ok(Self::NATIVE);
        }
        Self::all()
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| {
                format!("unknown convention '{s}' (expected native, std-neg, std-same, rev-neg or rev-same)")
            })
    }
}

/// `exp(-iφ σ_k/2)` for `k` in 1..=3.
pub fn rotation_2x2(pauli_index: usize, phi: f64) -> CMatrix {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let cc = C64::new(c, 0.0);
    let data = match pauli_index {
        1 => vec![cc, C64::new(0.0, -s), C64::new(0.0, -s), cc],
        2 => vec![cc, C64::new(-s, 0.0), C64::new(s, 0.0), cc],
        3 => vec![C64::new(c, -s), ZERO, ZERO, C64::new(c, s)],
        _ => panic!("axis index {pauli_index} out of range"),
    };
    CMatrix::from_vec(2, 2, data)
}

fn bit_of(x: usize, qubit: usize) -> usize {
    (x >> (NUM_QUBITS - qubit)) & 1
}

pub fn gate_matrix(g: &Gate, convention: RotationConvention) -> CMatrix {
    match *g {
        Gate::Rotation { qubit, axis, theta } => {
            let r = rotation_2x2(axis.pauli_index(), convention.angle_factor(axis) * theta);
            CMatrix::from_fn(DIM, DIM, |row, col| {
                let mask = !(1usize << (NUM_QUBITS - qubit));
                if row & mask != col & mask {
                    ZERO
                } else {
                    r[(bit_of(row, qubit), bit_of(col, qubit))]
                }
            })
        }
        Gate::Cnot { control, target } => {
            let mut m = CMatrix::zeros(DIM, DIM);
            for x in 0..DIM {
                let y = if bit_of(x, control) == 1 {
                    x ^ (1 << (NUM_QUBITS - target))
                } else {
                    x
                };
                m[(y, x)] = ONE;
            }
            m
        }
    }
}

/// Applies `g` in place to the columns of `u` (i.e. `u ← G u`).
fn apply_left(g: &Gate, convention: RotationConvention, u: &mut CMatrix) {
    match *g {
        Gate::Rotation { qubit, axis, theta } => {
            let r = rotation_2x2(axis.pauli_index(), convention.angle_factor(axis) * theta);
            let step = 1usize << (NUM_QUBITS - qubit);
            for x0 in (0..DIM).filter(|x| x & step == 0) {
                let x1 = x0 | step;
                for col in 0..u.cols() {
                    let (a, b) = (u[(x0, col)], u[(x1, col)]);
                    u[(x0, col)] = r[(0, 0)] * a + r[(0, 1)] * b;
                    u[(x1, col)] = r[(1, 0)] * a + r[(1, 1)] * b;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cbit = 1usize << (NUM_QUBITS - control);
            let tbit = 1usize << (NUM_QUBITS - target);
            for x0 in (0..DIM).filter(|x| x & cbit != 0 && x & tbit == 0) {
                let x1 = x0 | tbit;
                for col in 0..u.cols() {
                    let t = u[(x0, col)];
                    u[(x0, col)] = u[(x1, col)];
                    u[(x1, col)] = t;
                }
            }
        }
    }
}

/// `G_n ⋯ G_2 G_1` for gates listed in application order.
pub fn circuit_unitary(c: &Circuit, convention: RotationConvention) -> CMatrix {
    let mut u = CMatrix::identity(DIM);
    for g in &c.gates {
        apply_left(g, convention, &mut u);
    }
    u
}

/// `1 - |Tr(u†v)| / dim`: zero exactly when the two agree up to a global phase.
pub fn phase_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    let dim = u.rows() as f64;
    (1.0 - u.inner(v).norm() / dim).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn basis(k: usize) -> Vec<C64> {
        let mut v = vec![ZERO; DIM];
        v[k] = ONE;
        v
    }

    #[test]
    fn zero_rotation_is_identity() {
        let g = Gate::Rotation { qubit: 1, axis: Axis::Z, theta: 0.0 };
        assert!(gate_matrix(&g, RotationConvention::NATIVE).approx_eq(&CMatrix::identity(8), 0.0));
    }

    #[test]
    fn cnot_permutes_basis() {
        let g = Gate::Cnot { control: 3, target: 1 };
        let out = gate_matrix(&g, RotationConvention::NATIVE).mul_vec(&basis(0b001));
        assert_eq!(out, basis(0b101));
    }

    #[test]
    fn pi_rotation_about_y_flips_first_qubit() {
        let g = Gate::Rotation { qubit: 1, axis: Axis::Y, theta: PI };
        let m = gate_matrix(&g, RotationConvention::NATIVE);
        for low in 0..4 {
            let out = m.mul_vec(&basis(low));
            assert!((out[4 + low].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn circuits_of_cnots() {
        let c31 = Gate::Cnot { control: 3, target: 1 };
        let c21 = Gate::Cnot { control: 2, target: 1 };
        let twice = Circuit::new(vec![c31, c31]).unwrap();
        assert!(circuit_unitary(&twice, RotationConvention::NATIVE).approx_eq(&CMatrix::identity(8), 0.0));
        let cnn = Circuit::new(vec![c21, c31]).unwrap();
        let out = circuit_unitary(&cnn, RotationConvention::NATIVE).mul_vec(&basis(7));
        assert_eq!(out, basis(7));
        assert!(circuit_unitary(&Circuit::empty(), RotationConvention::NATIVE).approx_eq(&CMatrix::identity(8), 0.0));
    }

    #[test]
    fn in_place_application_matches_matrices() {
        let gates = vec![
            Gate::Rotation { qubit: 2, axis: Axis::XBar, theta: 0.7 },
            Gate::Cnot { control: 1, target: 3 },
            Gate::Rotation { qubit: 3, axis: Axis::Y, theta: -1.1 },
            Gate::Rotation { qubit: 1, axis: Axis::ZBar, theta: 2.3 },
        ];
        for conv in RotationConvention::all() {
            let c = Circuit::new(gates.clone()).unwrap();
            let dense = gates
                .iter()
                .fold(CMatrix::identity(8), |acc, g| &gate_matrix(g, conv) * &acc);
            assert!(circuit_unitary(&c, conv).approx_eq(&dense, 1e-15));
        }
    }

    #[test]
    fn gate_matrices_are_unitary() {
        for axis in [Axis::X, Axis::Y, Axis::Z, Axis::XBar, Axis::YBar, Axis::ZBar] {
            for q in 1..=3 {
                let m = gate_matrix(&Gate::Rotation { qubit: q, axis, theta: 0.37 }, RotationConvention::NATIVE);
                assert!(m.unitarity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_distance_examples() {
        let u = gate_matrix(&Gate::Rotation { qubit: 2, axis: Axis::X, theta: 0.4 }, RotationConvention::NATIVE);
        assert!(phase_distance(&u, &u) < 1e-15);
        let shifted = u.scale(C64::from_polar(1.0, PI / 3.0));
        assert!(phase_distance(&u, &shifted) < 1e-12);
        let mut d = vec![1.0; 8];
        d[7] = -1.0;
        let v = CMatrix::from_real_diag(&d);
        assert!((phase_distance(&CMatrix::identity(8), &v) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn convention_ids_round_trip() {
        for c in RotationConvention::all() {
            assert_eq!(c.id().parse::<RotationConvention>().unwrap(), c);
        }
        assert_eq!("native".parse::<RotationConvention>().unwrap(), RotationConvention::NATIVE);
        assert!("bogus".parse::<RotationConvention>().is_err());
    }

    #[test]
    fn invalid_gates() {
        assert!(Circuit::new(vec![Gate::Cnot { control: 2, target: 2 }]).is_err());
        assert!(Circuit::new(vec![Gate::Rotation { qubit: 4, axis: Axis::X, theta: 0.0 }]).is_err());
        assert!(Circuit::new(vec![Gate::Rotation { qubit: 1, axis: Axis::X, theta: f64::NAN }]).is_err());
    }

    #[test]
    fn reexpressed_circuit_keeps_its_unitary() {
        let c = Circuit::new(vec![
            Gate::Rotation { qubit: 1, axis: Axis::YBar, theta: 0.7 },
            Gate::Cnot { control: 1, target: 3 },
            Gate::Rotation { qubit: 2, axis: Axis::Z, theta: -1.1 },
        ])
        .unwrap();
        let u = circuit_unitary(&c, RotationConvention::NATIVE);
        for conv in RotationConvention::all() {
            let d = c.reexpressed(RotationConvention::NATIVE, conv);
            assert!(circuit_unitary(&d, conv).max_abs_diff(&u) < 1e-15, "{conv}");
        }
    }
}
