//! Acceptance suite. Each criterion runs in sequence, prints one PASS/FAIL
//! line with its measurements and runtime, and the test fails if any
//! criterion misses its tolerance or its time budget.

use std::time::{Duration, Instant};

use rand::Rng;

use sznagy_core::appendix;
use sznagy_core::channel::{
    chi_to_kraus, dephasing_generator, evolve_superop, kraus_to_chi, process_fidelity, superop_to_chi, ChiMatrix,
    DephasingParams, KrausSet,
};
use sznagy_core::dilation::{dilate_set, simulate_kraus_via_dilation};
use sznagy_core::experiment::{
    emit_appendix_report, prepare_experimental_set, reproduce_mfgp, reproduce_phase_damping, verify_appendix, RunConfig,
};
use sznagy_core::gates::{circuit_unitary, decompose_unitary, phase_distance, RotationConvention};
use sznagy_core::linalg::{CMatrix, C64};
use sznagy_core::random::{haar_unitary, kraus_operators, rng};
use sznagy_core::tomography::{
    add_record_noise, cptp_project_qpt_detailed, linear_inversion_qpt, InputBasis, TomographyRecord,
};
use sznagy_core::Result;

/// Published Kraus magnitudes of the dephasing set, sorted descending.
const PUBLISHED_MAGNITUDES: [f64; 4] = [0.5276, 0.5019, 0.4964, 0.4723];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn dephasing_params() -> DephasingParams {
    DephasingParams::default()
}

fn dephasing_record(p: &DephasingParams) -> Result<TomographyRecord> {
    let z = dephasing_generator(p);
    TomographyRecord::from_channel(&InputBasis::new(), |rho| {
        Ok(evolve_superop(&z, p.t, rho)?.into_matrix())
    })
}

fn criterion_1() -> Result<Outcome> {
    let p = dephasing_params();
    let chi = linear_inversion_qpt(&dephasing_record(&p)?)?;
    let eig = chi.eigen()?;
    let nonzero: Vec<f64> = eig.values.iter().copied().filter(|&d| d > 1e-10).collect();
    let roots: Vec<f64> = nonzero.iter().map(|d| d.sqrt()).collect();
    let worst = roots
        .iter()
        .zip(PUBLISHED_MAGNITUDES)
        .map(|(r, m)| (r - m).abs())
        .fold(0.0, f64::max);
    let kraus = chi_to_kraus(&chi)?;
    let norms = kraus.operator_norms();
    let norm_worst = norms
        .iter()
        .zip(PUBLISHED_MAGNITUDES)
        .map(|(r, m)| (r - m).abs())
        .fold(0.0, f64::max);
    outcome(
        nonzero.len() == 4 && roots.len() == 4 && worst <= 1e-3 && norm_worst <= 1e-3,
        format!(
            "{} eigenvalues > 1e-10, sqrt {:.4?}, max deviation {worst:.2e}, Kraus norm deviation {norm_worst:.2e}",
            nonzero.len(),
            roots
        ),
    )
}

/// χ of the product of two single-qubit dephasing channels with
/// retention weights `p = (1 + e^{-γt})/2`, written down directly.
fn closed_form_dephasing_chi(p: &DephasingParams) -> ChiMatrix {
    let p1 = (1.0 + (-p.gamma1 * p.t).exp()) / 2.0;
    let p2 = (1.0 + (-p.gamma2 * p.t).exp()) / 2.0;
    let mut m = CMatrix::zeros(16, 16);
    m[(0, 0)] = C64::new(p1 * p2, 0.0);
    m[(3, 3)] = C64::new(p1 * (1.0 - p2), 0.0);
    m[(12, 12)] = C64::new((1.0 - p1) * p2, 0.0);
    m[(15, 15)] = C64::new((1.0 - p1) * (1.0 - p2), 0.0);
    ChiMatrix::new(m).expect("diagonal")
}

fn criterion_2() -> Result<Outcome> {
    let p = dephasing_params();
    let chi = superop_to_chi(&dephasing_generator(&p).exp(p.t));
    let kraus = chi_to_kraus(&chi)?;
    let rebuilt = kraus_to_chi(&kraus);
    let d = rebuilt.matrix().distance(closed_form_dephasing_chi(&p).matrix());
    outcome(d <= 1e-8, format!("Frobenius distance to product-channel χ {d:.2e}"))
}

fn dephasing_kraus() -> Result<KrausSet> {
    let p = dephasing_params();
    chi_to_kraus(&superop_to_chi(&dephasing_generator(&p).exp(p.t)))
}

fn mfgp_renormalized() -> Result<KrausSet> {
    Ok(prepare_experimental_set(appendix::mfgp_kraus(), true)?.1)
}

fn criterion_3() -> Result<Outcome> {
    let basis = InputBasis::new();
    let mut worst_block: f64 = 0.0;
    let mut worst_unitary: f64 = 0.0;
    let mut count = 0;
    for set in [dephasing_kraus()?, mfgp_renormalized()?] {
        for (u, a) in dilate_set(&set)?.iter().zip(set.operators()) {
            count += 1;
            worst_unitary = worst_unitary.max(u.unitarity_defect());
            for phi in basis.states() {
                let block = simulate_kraus_via_dilation(u, phi)?.block;
                let v = a.mul_vec(phi.amplitudes());
                worst_block = worst_block.max(block.max_abs_diff(&CMatrix::outer(&v, &v)));
            }
        }
    }
    outcome(
        count == 8 && worst_block <= 1e-10 && worst_unitary <= 1e-10,
        format!("{count} dilations x 16 states, max block error {worst_block:.2e}, max unitarity defect {worst_unitary:.2e}"),
    )
}

fn criterion_4() -> Result<Outcome> {
    let mut targets: Vec<CMatrix> = Vec::new();
    for set in [dephasing_kraus()?, mfgp_renormalized()?] {
        targets.extend(dilate_set(&set)?.into_iter().map(|u| u.matrix));
    }
    let mut r = rng(2024);
    targets.extend((0..100).map(|_| haar_unitary(&mut r, 8)));
    let mut worst: f64 = 0.0;
    let mut max_cnot = 0;
    for u in &targets {
        let c = decompose_unitary(u)?;
        max_cnot = max_cnot.max(c.cnot_count());
        worst = worst.max(phase_distance(&circuit_unitary(&c, RotationConvention::NATIVE), u));
    }
    outcome(
        worst <= 1e-8,
        format!("{} unitaries, max phase distance {worst:.2e}, max CNOT count {max_cnot}", targets.len()),
    )
}

fn criterion_5() -> Result<Outcome> {
    let r = reproduce_phase_damping(&RunConfig::default())?;
    let min_state = r.per_state_fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        (r.process_fidelity - 1.0).abs() <= 1e-6 && min_state >= 1.0 - 1e-8 && r.per_state_fidelities.len() == 16,
        format!(
            "process fidelity {:.12}, min per-state fidelity {min_state:.12} (hardware reference {})",
            r.process_fidelity, r.reference.process_fidelity
        ),
    )
}

fn criterion_6() -> Result<Outcome> {
    let verbatim = KrausSet::experimental(appendix::mfgp_kraus())?;
    let defect = verbatim.completeness_defect();
    let max_norm = verbatim.operator_norms().into_iter().fold(0.0, f64::max);
    let config = RunConfig {
        renormalize_kraus: true,
        ..RunConfig::default()
    };
    let r = reproduce_mfgp(&config)?;
    outcome(
        defect <= 0.05 && max_norm <= 1.02 && (r.process_fidelity - 1.0).abs() <= 1e-6,
        format!(
            "completeness defect {defect:.4}, max norm {max_norm:.4}, renormalized process fidelity {:.12} (hardware reference {})",
            r.process_fidelity, r.reference.process_fidelity
        ),
    )
}

fn criterion_7() -> Result<Outcome> {
    let p = dephasing_params();
    let truth = superop_to_chi(&dephasing_generator(&p).exp(p.t));
    let clean = dephasing_record(&p)?;
    let mut min_eig = f64::INFINITY;
    let mut max_tp: f64 = 0.0;
    let mut min_fid = f64::INFINITY;
    for seed in 1..=20u64 {
        let fit = cptp_project_qpt_detailed(&add_record_noise(&clean, 0.01, seed))?;
        min_eig = min_eig.min(fit.min_eigenvalue);
        max_tp = max_tp.max(fit.tp_defect);
        min_fid = min_fid.min(process_fidelity(&fit.chi, &truth)?);
    }

    let basis = InputBasis::new();
    let mut r = rng(7);
    let mut worst_li: f64 = 0.0;
    for _ in 0..50 {
        let count = r.random_range(1..=4);
        let set = KrausSet::synthetic(kraus_operators(&mut r, 4, count))?;
        let rec = TomographyRecord::from_channel(&basis, |rho| {
            Ok(sznagy_core::channel::apply_operators(set.operators(), rho.matrix()))
        })?;
        let chi = linear_inversion_qpt(&rec)?;
        worst_li = worst_li.max(chi.matrix().distance(kraus_to_chi(&set).matrix()));
    }
    outcome(
        min_eig >= -1e-10 && max_tp <= 1e-8 && min_fid >= 0.99 && worst_li <= 1e-10,
        format!(
            "20 noisy fits: min eigenvalue {min_eig:.2e}, max TP defect {max_tp:.2e}, min fidelity {min_fid:.5}; \
             50 random channels: max linear-inversion error {worst_li:.2e}"
        ),
    )
}

fn criterion_8() -> Result<Outcome> {
    let report = verify_appendix(&RunConfig::default())?;
    let dir = tempfile::tempdir()?;
    let files = emit_appendix_report(&report, dir.path())?;
    let complete = report.entries.len() == 8 && report.entries.iter().all(|e| e.distances.len() == 4);
    let worst = report.worst_self_check();
    outcome(
        complete && worst <= 1e-8 && files.iter().all(|f| f.exists()),
        format!("{} gate lists x 4 conventions, worst self-check distance {worst:.2e}", report.entries.len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<Outcome>, u64); 8] = [
        ("1 dephasing chi spectrum", criterion_1, 1),
        ("2 channel-equivalence oracle", criterion_2, 1),
        ("3 dilation exactness", criterion_3, 1),
        ("4 gate round-trip", criterion_4, 30),
        ("5 end-to-end identity", criterion_5, 10),
        ("6 gradient-pulse data integrity", criterion_6, 10),
        ("7 noisy tomography suite", criterion_7, 60),
        ("8 convention diagnostics", criterion_8, 10),
    ];
    let mut failures = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(budget);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} criterion {name}: {detail} [{:.3} s, budget {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
