use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{circuit_unitary, phase_distance, Circuit, RotationConvention};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConventionDistance {
    pub convention: RotationConvention,
    pub distance: f64,
}

/// Distances of a gate list to a target unitary under several rotation
/// conventions. Purely diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub distances: Vec<ConventionDistance>,
    pub best: ConventionDistance,
}

impl VerificationReport {
    pub fn distance_for(&self, convention: RotationConvention) -> Option<f64> {
        self.distances
            .iter()
            .find(|d| d.convention == convention)
            .map(|d| d.distance)
    }
}

/// `conventions` must be non-empty.
pub fn verify_gate_list(c: &Circuit, target: &CMatrix, conventions: &[RotationConvention]) -> VerificationReport {
    assert!(!conventions.is_empty(), "at least one convention is required");
    let distances: Vec<ConventionDistance> = conventions
        .par_iter()
        .map(|&convention| ConventionDistance {
            convention,
            distance: phase_distance(&circuit_unitary(c, convention), target),
        })
        .collect();
    let best = *distances
        .iter()
        .min_by(|a, b| a.distance.total_cmp(&b.distance))
        .expect("non-empty");
    VerificationReport { distances, best }
}
