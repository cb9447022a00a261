//! Open-quantum-system simulation by minimal unitary (Sz.-Nagy) dilation.
//!
//! The pipeline runs: channel description → process matrix → Kraus set →
//! one 8×8 dilation unitary per Kraus operator → CNOT + rotation circuit →
//! circuit simulation with ancilla projection → process tomography of the
//! reassembled channel.
//!
//! Modules, bottom up:
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, matrix functions.
//! - [`channel`]: density matrices, Kraus sets, superoperators, χ matrices.
//! - [`dilation`]: dilation unitaries, ancilla embedding and projection.
//! - [`gates`]: gate IR, circuit evaluation, decomposition, gate-list formats.
//! - [`tomography`]: input basis, linear-inversion and CPTP-constrained QPT.
//! - [`experiment`]: end-to-end runs and report emission used by the CLI.

pub mod appendix;
pub mod channel;
pub mod dilation;
pub mod error;
pub mod experiment;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod random;
pub mod tolerances;
pub mod tomography;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
