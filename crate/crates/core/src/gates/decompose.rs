//! Synthesis of 8×8 unitaries into CNOT + rotation circuits.
//!
//! The unitary is split column block by column block with the cosine-sine
//! decomposition
//!
//! ```text
//! U = diag(L₁, L₂) · [[C, -S], [S, C]] · diag(Q₁, Q₂)
//! ```
//!
//! applied recursively on qubits 1, 2, 3. The middle factor is a
//! uniformly controlled `R_y` on the split qubit; the outer factors are
//! block diagonal and recurse. After three levels only diagonal layers
//! remain. Each diagonal is peeled into a uniformly controlled `R_z` on the
//! next `R_y` target plus a remainder that commutes through and merges
//! into the following diagonal. Uniformly controlled rotations are
//! expanded into rotations and CNOTs along a Gray code.

use super::{circuit_unitary, phase_distance, Axis, Circuit, Gate, RotationConvention, DIM, NUM_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, orthonormal_columns, vec_norm, CMatrix, C64};
use crate::tolerances::Tolerances;

/// Angle differences below this are treated as equal when pruning controls
/// and angles below it are dropped.
const ANGLE_EPS: f64 = 1e-12;
/// Column norms below this are treated as zero in the cosine-sine step.
const NORM_EPS: f64 = 1e-9;
/// Rebuild tolerance for the finished circuit.
const REBUILD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
enum Layer {
    /// Diagonal unitary, stored as phases of the 8 basis states.
    Diag(Vec<f64>),
    /// Rotation on `target` whose angle depends on all other qubits.
    /// `angles` is indexed by the other qubits read in ascending order, the
    /// lowest-numbered one most significant.
    Ucr { axis: Axis, target: usize, angles: Vec<f64> },
}

struct CsBlock {
    left: (CMatrix, CMatrix),
    right: (CMatrix, CMatrix),
    theta: Vec<f64>,
}

/// Cosine-sine decomposition of an even-sized unitary block.
fn cosine_sine(u: &CMatrix) -> Result<CsBlock> {
    let m = u.rows();
    let k = m / 2;
    let a = u.block(0, 0, k, k);
    let b = u.block(0, k, k, k);
    let c = u.block(k, 0, k, k);
    let d = u.block(k, k, k, k);

    let eig = eig_hermitian(&(&a.adjoint() * &a).hermitian_part())?;
    let r1 = eig.vectors;
    let mut cos = Vec::with_capacity(k);
    let mut sin = Vec::with_capacity(k);
    let mut l1_cand = Vec::with_capacity(k);
    let mut l2_cand = Vec::with_capacity(k);
    for i in 0..k {
        let ri = r1.col(i);
        let ai = a.mul_vec(&ri);
        let gi = c.mul_vec(&ri);
        let (ci, si) = (vec_norm(&ai), vec_norm(&gi));
        cos.push(ci);
        sin.push(si);
        l1_cand.push((ci > NORM_EPS).then(|| ai.iter().map(|z| z / ci).collect::<Vec<_>>()));
        l2_cand.push((si > NORM_EPS).then(|| gi.iter().map(|z| z / si).collect::<Vec<_>>()));
    }
    let mut by_cos: Vec<usize> = (0..k).collect();
    by_cos.sort_by(|&x, &y| cos[y].total_cmp(&cos[x]).then(x.cmp(&y)));
    let mut by_sin: Vec<usize> = (0..k).collect();
    by_sin.sort_by(|&x, &y| sin[y].total_cmp(&sin[x]).then(x.cmp(&y)));
    let l1 = orthonormal_columns(k, &l1_cand, &by_cos);
    let l2 = orthonormal_columns(k, &l2_cand, &by_sin);

    let theta: Vec<f64> = (0..k).map(|i| sin[i].atan2(cos[i])).collect();
    let (bd, dd) = (b.adjoint(), d.adjoint());
    let r2_cand: Vec<Option<Vec<C64>>> = (0..k)
        .map(|i| {
            let (ci, si) = (theta[i].cos(), theta[i].sin());
            let x = bd.mul_vec(&l1.col(i));
            let y = dd.mul_vec(&l2.col(i));
            Some(x.iter().zip(&y).map(|(p, q)| -p * si + q * ci).collect())
        })
        .collect();
    let order: Vec<usize> = (0..k).collect();
    let r2 = orthonormal_columns(k, &r2_cand, &order);

    Ok(CsBlock {
        left: (l1, l2),
        right: (r1.adjoint(), r2.adjoint()),
        theta,
    })
}

/// Recursive layer list, in application order, for block-diagonal `blocks`
/// split on `qubit`.
fn layers_for(blocks: Vec<CMatrix>, qubit: usize) -> Result<Vec<Layer>> {
    if qubit > NUM_QUBITS {
        let phases = blocks.iter().map(|b| b[(0, 0)].arg()).collect();
        return Ok(vec![Layer::Diag(phases)]);
    }
    let k = blocks[0].rows() / 2;
    let mut rights = Vec::with_capacity(2 * blocks.len());
    let mut lefts = Vec::with_capacity(2 * blocks.len());
    let mut angles = vec![0.0; DIM / 2];
    let low_bits = NUM_QUBITS - qubit;
    for (bi, block) in blocks.iter().enumerate() {
        let cs = cosine_sine(block)?;
        rights.push(cs.right.0);
        rights.push(cs.right.1);
        lefts.push(cs.left.0);
        lefts.push(cs.left.1);
        for (r, th) in cs.theta.iter().enumerate() {
            angles[(bi << low_bits) | r] = 2.0 * th;
        }
        debug_assert_eq!(cs.theta.len(), k);
    }
    let mut out = layers_for(rights, qubit + 1)?;
    out.push(Layer::Ucr { axis: Axis::Y, target: qubit, angles });
    out.extend(layers_for(lefts, qubit + 1)?);
    Ok(out)
}

/// Index of the basis state with `target` set to `bit` and the other qubits
/// given by `rest` (ascending qubit order, most significant first).
fn compose_index(target: usize, bit: usize, rest: usize) -> usize {
    let pos = NUM_QUBITS - target;
    let high = rest >> pos;
    let low = rest & ((1 << pos) - 1);
    (high << (pos + 1)) | (bit << pos) | low
}

/// Splits a diagonal into a uniformly controlled `R_z` on `target` and a
/// remainder independent of `target`: `D = Rest · UCRz`.
fn peel_diagonal(phases: &[f64], target: usize) -> (Vec<f64>, Vec<f64>) {
    let mut angles = vec![0.0; DIM / 2];
    let mut rest = vec![0.0; DIM];
    for r in 0..DIM / 2 {
        let i0 = compose_index(target, 0, r);
        let i1 = compose_index(target, 1, r);
        angles[r] = phases[i1] - phases[i0];
        let mean = 0.5 * (phases[i0] + phases[i1]);
        rest[i0] = mean;
        rest[i1] = mean;
    }
    (angles, rest)
}

/// Replaces diagonals by uniformly controlled `R_z` layers, leaving only
/// rotation layers and a discarded global phase.
fn eliminate_diagonals(layers: Vec<Layer>) -> Vec<Layer> {
    let mut out = Vec::new();
    let mut carry = vec![0.0; DIM];
    for layer in layers {
        match layer {
            Layer::Diag(p) => {
                for (c, x) in carry.iter_mut().zip(&p) {
                    *c += x;
                }
            }
            Layer::Ucr { target, .. } => {
                let (angles, rest) = peel_diagonal(&carry, target);
                out.push(Layer::Ucr { axis: Axis::Z, target, angles });
                out.push(layer);
                carry = rest;
            }
        }
    }
    for target in (1..=NUM_QUBITS).rev() {
        let (angles, rest) = peel_diagonal(&carry, target);
        out.push(Layer::Ucr { axis: Axis::Z, target, angles });
        carry = rest;
    }
    out
}

fn gray(j: usize) -> usize {
    j ^ (j >> 1)
}

/// Expands a uniformly controlled rotation into rotations and CNOTs.
fn expand_ucr(axis: Axis, target: usize, angles: &[f64], gates: &mut Vec<Gate>) {
    let mut controls: Vec<usize> = (1..=NUM_QUBITS).filter(|&q| q != target).collect();
    let mut alpha = angles.to_vec();

    // Drop controls the angles do not depend on.
    let mut idx = 0;
    while idx < controls.len() {
        let n = controls.len();
        let bit = n - 1 - idx;
        let independent = (0..alpha.len())
            .filter(|x| x & (1 << bit) == 0)
            .all(|x| (alpha[x] - alpha[x | (1 << bit)]).abs() < ANGLE_EPS);
        if independent {
            alpha = (0..alpha.len())
                .filter(|x| x & (1 << bit) == 0)
                .map(|x| alpha[x])
                .collect();
            controls.remove(idx);
        } else {
            idx += 1;
        }
    }

    let k = controls.len();
    let n = 1usize << k;
    let theta: Vec<f64> = (0..n)
        .map(|j| {
            let g = gray(j);
            let s: f64 = (0..n)
                .map(|x| {
                    let sign = if (x & g).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * alpha[x]
                })
                .sum();
            wrap(s / n as f64)
        })
        .collect();

    for j in 0..n {
        if theta[j].abs() > ANGLE_EPS {
            gates.push(Gate::Rotation { qubit: target, axis, theta: theta[j] });
        }
        if k > 0 {
            let flipped = gray(j) ^ gray((j + 1) % n);
            let bit = flipped.trailing_zeros() as usize;
            let control = controls[k - 1 - bit];
            gates.push(Gate::Cnot { control, target });
        }
    }
}

/// Wraps into `(-π, π]`; shifting a rotation angle by 2π only flips the global sign.
fn wrap(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// Cancels adjacent identical CNOTs and fuses adjacent rotations about the
/// same axis on the same qubit, repeating until nothing changes.
fn peephole(gates: Vec<Gate>) -> Vec<Gate> {
    let mut cur = gates;
    loop {
        let mut out: Vec<Gate> = Vec::with_capacity(cur.len());
        let mut changed = false;
        for g in cur {
            match (out.last().copied(), g) {
                (Some(Gate::Cnot { control: c0, target: t0 }), Gate::Cnot { control, target })
                    if c0 == control && t0 == target =>
                {
                    out.pop();
                    changed = true;
                }
                (
                    Some(Gate::Rotation { qubit: q0, axis: a0, theta: t0 }),
                    Gate::Rotation { qubit, axis, theta },
                ) if q0 == qubit && a0 == axis => {
                    out.pop();
                    let t = wrap(t0 + theta);
                    if t.abs() > ANGLE_EPS {
                        out.push(Gate::Rotation { qubit, axis, theta: t });
                    }
                    changed = true;
                }
                _ => out.push(g),
            }
        }
        cur = out;
        if !changed {
            return cur;
        }
    }
}

/// Compiles an 8×8 unitary into a circuit equal to it up to global phase
/// under [`RotationConvention::NATIVE`].
pub fn decompose_unitary(u: &CMatrix) -> Result<Circuit> {
    if u.dims() != (DIM, DIM) {
        return Err(Error::Dimension(format!(
            "decomposition needs an {DIM}x{DIM} unitary, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > Tolerances::DEFAULT.unitarity {
        return Err(Error::NotUnitary { defect });
    }
    let layers = eliminate_diagonals(layers_for(vec![u.clone()], 1)?);
    let mut gates = Vec::new();
    for layer in &layers {
        if let Layer::Ucr { axis, target, angles } = layer {
            expand_ucr(*axis, *target, angles, &mut gates);
        }
    }
    let circuit = Circuit::new(peephole(gates))?;
    let residual = phase_distance(&circuit_unitary(&circuit, RotationConvention::NATIVE), u);
    if residual > REBUILD_TOL {
        return Err(Error::NoConvergence { iterations: 1, residual });
    }
    log::debug!(
        "decomposed unitary: {} CNOTs, {} rotations, rebuild distance {residual:.2e}",
        circuit.cnot_count(),
        circuit.rotation_count()
    );
    Ok(circuit)
}
