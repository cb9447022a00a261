use std::path::Path;

use rayon::prelude::*;

use super::{
    AngleCheck, AppendixEntry, AppendixReport, ComplexArrays, DilationSummary, ExperimentReport,
    HardwareReference, KrausSummary, RunConfig, SelfCheck,
};
use crate::appendix::{self, AppendixCircuit, Experiment};
use crate::channel::{
    chi_to_kraus, dephasing_generator, kraus_to_chi, normalized_overlap, process_fidelity, superop_to_chi,
    ChiMatrix, KrausSet, Superoperator,
};
use crate::dilation::{dilate, dilate_set, project_through};
use crate::error::{Error, Result, StageExt};
use crate::gates::{
    circuit_unitary, decompose_unitary, phase_distance, serialize_gate_list, verify_gate_list, Circuit,
    RotationConvention,
};
use crate::io::read_kraus_file;
use crate::linalg::CMatrix;
use crate::random::derive_seed;
use crate::tolerances::Tolerances;
use crate::tomography::{
    add_measurement_noise, add_record_noise, cptp_project_qpt, linear_inversion_qpt, InputBasis, TomographyRecord,
};

/// Overlap that treats two vanishing matrices as identical.
fn overlap_or_trivial(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let floor = Tolerances::DEFAULT.zero_norm;
    match (a.frobenius_norm() < floor, b.frobenius_norm() < floor) {
        (true, true) => Ok(1.0),
        (true, false) | (false, true) => Ok(0.0),
        _ => normalized_overlap(a, b),
    }
}

fn compile(u: &CMatrix, convention: RotationConvention) -> Result<(Circuit, CMatrix)> {
    let c = decompose_unitary(u)?.reexpressed(RotationConvention::NATIVE, convention);
    let rebuilt = circuit_unitary(&c, convention);
    Ok((c, rebuilt))
}

/// Dilate, compile and simulate `kraus` on the input basis, then
/// reconstruct the channel by tomography and compare it with `chi_target`.
pub fn run_pipeline(
    experiment: Experiment,
    kraus: &KrausSet,
    summary: KrausSummary,
    chi_target: &ChiMatrix,
    config: &RunConfig,
) -> Result<ExperimentReport> {
    config.validate().stage("config")?;
    let tol = Tolerances::DEFAULT;
    let dilations = dilate_set(kraus).stage("dilation")?;
    let compiled: Vec<(Circuit, CMatrix)> = dilations
        .par_iter()
        .map(|d| compile(&d.matrix, config.convention))
        .collect::<Result<_>>()
        .stage("decomposition")?;
    let gate_counts: Vec<DilationSummary> = dilations
        .iter()
        .zip(&compiled)
        .map(|(d, (c, u))| DilationSummary {
            kraus_index: d.kraus_index,
            counts: c.counts(),
            unitarity_defect: d.unitarity_defect(),
            rebuild_distance: phase_distance(u, &d.matrix),
            gate_list: serialize_gate_list(c),
        })
        .collect();
    for g in &gate_counts {
        log::info!(
            "dilation {}: {} CNOT, {} rotations, rebuild distance {:.3e}",
            g.kraus_index,
            g.counts.cnot,
            g.counts.rotation,
            g.rebuild_distance
        );
    }

    let basis = InputBasis::new();
    let ops = kraus.operators();
    let k = ops.len();
    let sigma = config.noise_sigma;
    // Per state and Kraus index: (through the compiled circuit, directly A ρ A†).
    let branches: Vec<Vec<(CMatrix, CMatrix)>> = basis
        .states()
        .par_iter()
        .map(|phi| {
            compiled
                .iter()
                .zip(ops)
                .map(|((_, u), a)| {
                    let v = a.mul_vec(phi.amplitudes());
                    Ok((project_through(u, phi)?.block, CMatrix::outer(&v, &v)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()
        .stage("simulation")?;

    let per_state_overlaps = branches
        .iter()
        .enumerate()
        .map(|(s, row)| {
            row.iter()
                .enumerate()
                .map(|(i, (sim, direct))| {
                    if sigma > 0.0 {
                        let stream = (basis.len() + s * k + i) as u64;
                        let noisy = add_measurement_noise(sim, sigma, derive_seed(config.seed, stream));
                        overlap_or_trivial(&noisy, direct)
                    } else {
                        overlap_or_trivial(sim, direct)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .stage("simulation")?;

    let inputs = basis.density_matrices();
    let outputs: Vec<CMatrix> = branches
        .iter()
        .map(|row| row.iter().fold(CMatrix::zeros(4, 4), |acc, (b, _)| &acc + b))
        .collect();
    let mut record = TomographyRecord::new(inputs.clone(), outputs).stage("tomography")?;
    if sigma > 0.0 {
        record = add_record_noise(&record, sigma, config.seed);
    }
    let targets: Vec<CMatrix> = inputs.iter().map(|r| chi_target.apply(r.matrix())).collect();
    let per_state_fidelities = record
        .outputs()
        .iter()
        .zip(&targets)
        .map(|(o, t)| overlap_or_trivial(o, t))
        .collect::<Result<Vec<_>>>()
        .stage("simulation")?;

    let (qpt_method, chi_simulated) = if sigma > 0.0 {
        ("cptp", cptp_project_qpt(&record))
    } else {
        ("linear", linear_inversion_qpt(&record))
    };
    let chi_simulated = chi_simulated.stage("tomography")?;
    let process_fidelity = process_fidelity(chi_target, &chi_simulated).stage("tomography")?;
    log::info!("{}: process fidelity {process_fidelity:.12}", experiment.name());

    let published_cnots = match experiment {
        Experiment::PhaseDamping => appendix::PUBLISHED_CNOTS_PHASE_DAMPING.to_vec(),
        Experiment::Mfgp => vec![appendix::PUBLISHED_CNOTS_MFGP; 4],
    };
    Ok(ExperimentReport {
        experiment: experiment.name().into(),
        version: crate::VERSION.into(),
        config: config.clone(),
        tolerances: tol,
        qpt_method: qpt_method.into(),
        states: basis.labels().to_vec(),
        kraus: summary,
        per_state_overlaps,
        per_state_fidelities,
        process_fidelity,
        chi_target: ComplexArrays::from(chi_target),
        chi_simulated: ComplexArrays::from(&chi_simulated),
        chi_target_eigenvalues: chi_target.eigen().stage("tomography")?.values,
        chi_simulated_eigenvalues: chi_simulated.eigen().stage("tomography")?.values,
        gate_counts,
        reference: HardwareReference {
            source: appendix::HARDWARE_SOURCE.into(),
            process_fidelity: experiment.hardware_process_fidelity(),
            per_state_overlaps: appendix::hardware_overlaps(experiment),
            per_state_fidelities: appendix::hardware_fidelities(experiment),
            published_cnots,
        },
    })
}

/// The dephasing channel in all three representations.
#[derive(Debug, Clone)]
pub struct GeneratedChannel {
    pub superoperator: Superoperator,
    pub chi: ChiMatrix,
    pub kraus: KrausSet,
}

pub fn gen_channel(config: &RunConfig) -> Result<GeneratedChannel> {
    let p = config.dephasing().stage("config")?;
    let superoperator = dephasing_generator(&p).exp(p.t);
    let chi = superop_to_chi(&superoperator);
    let kraus = chi_to_kraus(&chi).stage("kraus")?;
    Ok(GeneratedChannel {
        superoperator,
        chi,
        kraus,
    })
}

fn summarize(source: &str, input: &KrausSet, used: &KrausSet, renormalized: bool) -> KrausSummary {
    KrausSummary {
        source: source.into(),
        count: used.len(),
        operator_norms: input.operator_norms(),
        input_completeness_defect: input.completeness_defect(),
        completeness_defect: used.completeness_defect(),
        renormalized,
    }
}

pub fn reproduce_phase_damping(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate().stage("config")?;
    let g = gen_channel(config)?;
    let summary = summarize("generator", &g.kraus, &g.kraus, false);
    run_pipeline(Experiment::PhaseDamping, &g.kraus, summary, &g.chi, config)
}

/// Loads measured Kraus data under the relaxed tolerance and optionally
/// renormalizes it. Without renormalization an incomplete set is an error.
pub fn prepare_experimental_set(ops: Vec<CMatrix>, renormalize: bool) -> Result<(KrausSet, KrausSet)> {
    let input = KrausSet::experimental(ops)?;
    let used = if renormalize {
        input.renormalized()?
    } else {
        input.ensure_complete()?;
        if input.completeness_defect() > Tolerances::DEFAULT.completeness {
            log::warn!(
                "Kraus data used verbatim with completeness defect {:.4e}; pass --renormalize to correct it",
                input.completeness_defect()
            );
        }
        input.clone()
    };
    Ok((input, used))
}

pub fn reproduce_mfgp(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate().stage("config")?;
    let (source, ops) = match &config.kraus_file {
        Some(path) => (path.clone(), read_kraus_file(Path::new(path)).stage("input")?),
        None => ("bundled".to_owned(), appendix::mfgp_kraus()),
    };
    let (input, used) = prepare_experimental_set(ops, config.renormalize_kraus).stage("kraus")?;
    let chi_target = kraus_to_chi(&used);
    let summary = summarize(&source, &input, &used, config.renormalize_kraus);
    run_pipeline(Experiment::Mfgp, &used, summary, &chi_target, config)
}

fn appendix_entry(
    set: &str,
    circuit: &AppendixCircuit,
    target: &CMatrix,
    selected: RotationConvention,
) -> Result<AppendixEntry> {
    let c = circuit.circuit()?;
    let report = verify_gate_list(&c, target, &RotationConvention::all());
    let (ours, rebuilt) = compile(target, RotationConvention::NATIVE)?;
    Ok(AppendixEntry {
        set: set.into(),
        name: circuit.name.clone(),
        kraus_index: circuit.kraus_index,
        published_counts: c.counts(),
        selected_distance: report.distance_for(selected).unwrap_or(f64::NAN),
        best: report.best,
        distances: report.distances,
        self_check: SelfCheck {
            counts: ours.counts(),
            distance: phase_distance(&rebuilt, target),
        },
    })
}

/// Distances of every published gate list to the dilation of the
/// published operator it implements, under all four conventions.
pub fn verify_appendix(config: &RunConfig) -> Result<AppendixReport> {
    let pd_ops = appendix::phase_damping_kraus();
    let (_, mfgp) = prepare_experimental_set(appendix::mfgp_kraus(), config.renormalize_kraus).stage("kraus")?;
    let mut jobs: Vec<(&str, AppendixCircuit, CMatrix)> = Vec::new();
    for c in appendix::phase_damping_circuits() {
        let a = pd_ops
            .get(c.kraus_index)
            .ok_or_else(|| Error::Data(format!("{} refers to a missing operator", c.name)))?;
        jobs.push((Experiment::PhaseDamping.name(), c, a.clone()));
    }
    for c in appendix::mfgp_circuits().stage("input")? {
        let a = mfgp.operators()[c.kraus_index].clone();
        jobs.push((Experiment::Mfgp.name(), c, a));
    }
    let entries = jobs
        .par_iter()
        .map(|(set, c, a)| {
            let u = dilate(a)?;
            appendix_entry(set, c, &u.matrix, config.convention)
        })
        .collect::<Result<Vec<_>>>()
        .stage("verification")?;
    Ok(AppendixReport {
        version: crate::VERSION.into(),
        config: config.clone(),
        tolerances: Tolerances::DEFAULT,
        mfgp_renormalized: config.renormalize_kraus,
        entries,
        theta1_check: AngleCheck {
            gate_list_value: appendix::PUBLISHED_THETA1_A1,
            figure_value: appendix::FIGURE_THETA1_A1,
            difference: (appendix::PUBLISHED_THETA1_A1 - appendix::FIGURE_THETA1_A1).abs(),
        },
    })
}
