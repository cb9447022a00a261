//! `sznagy`: command-line front end for the dilation simulator.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sznagy_core::channel::{chi_to_kraus, process_fidelity, ChiMatrix, KrausSet, SYSTEM_DIM};
use sznagy_core::dilation::{dilate_indexed, project_through};
use sznagy_core::experiment::{
    emit_appendix_report, emit_report, gen_channel, reproduce_mfgp, reproduce_phase_damping, verify_appendix,
    write_channel, RunConfig,
};
use sznagy_core::gates::{
    circuit_unitary, decompose_unitary, parse_gate_list, phase_distance, serialize_gate_list, RotationConvention,
};
use sznagy_core::io::{read_json, read_kraus_file, read_matrix_file, write_json, KrausFile, MatrixFile};
use sznagy_core::linalg::CMatrix;
use sznagy_core::tomography::{
    add_record_noise, cptp_project_qpt_detailed, linear_inversion_qpt, qpt_objective, InputBasis, TomographyRecord,
};
use sznagy_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "sznagy", version, about = "Open-system simulation by minimal unitary dilation")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// RunConfig JSON file; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "S")]
    noise_sigma: Option<f64>,
    /// Rescale experimental Kraus data to an exactly complete set.
    #[arg(long, global = true)]
    renormalize: bool,
    /// native, std-neg, std-same, rev-neg or rev-same.
    #[arg(long, global = true, value_name = "ID")]
    convention: Option<RotationConvention>,
    #[arg(long, global = true)]
    gamma1: Option<f64>,
    #[arg(long, global = true)]
    gamma2: Option<f64>,
    /// Evolution time.
    #[arg(long = "time", global = true)]
    t: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the dephasing channel as superoperator, χ and Kraus JSON.
    GenChannel,
    /// Extract Kraus operators from a χ file (default: the configured dephasing channel).
    Kraus {
        #[arg(long, value_name = "FILE")]
        chi: Option<PathBuf>,
    },
    /// Build one dilation unitary per Kraus operator.
    Dilate {
        /// Kraus JSON (default: the configured dephasing channel).
        #[arg(long, value_name = "FILE")]
        kraus: Option<PathBuf>,
    },
    /// Compile an 8×8 unitary into CNOTs and rotations.
    Decompose {
        #[arg(long, value_name = "FILE")]
        unitary: PathBuf,
    },
    /// Run gate lists (one per Kraus branch) on the 16 input states and record the outputs.
    Simulate {
        #[arg(long = "gates", value_name = "FILE", required = true, num_args = 1..)]
        gates: Vec<PathBuf>,
    },
    /// Process tomography of a recorded input/output set.
    Qpt {
        #[arg(long, value_name = "FILE")]
        record: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Linear)]
        method: Method,
        /// χ file to compare against.
        #[arg(long, value_name = "FILE")]
        target: Option<PathBuf>,
    },
    /// End-to-end reproduction of one experiment.
    Reproduce {
        #[arg(value_enum)]
        experiment: Which,
        /// Kraus JSON for the gradient-pulse run (default: bundled data).
        #[arg(long, value_name = "FILE")]
        kraus_file: Option<PathBuf>,
    },
    /// Distances of the published gate lists under every rotation convention.
    VerifyAppendix,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Linear,
    Cptp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    PhaseDamping,
    Mfgp,
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut c: RunConfig = match &g.config {
        Some(path) => read_json(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = g.noise_sigma {
        c.noise_sigma = v;
    }
    if let Some(v) = g.convention {
        c.convention = v;
    }
    if let Some(v) = g.gamma1 {
        c.gamma1 = v;
    }
    if let Some(v) = g.gamma2 {
        c.gamma2 = v;
    }
    if let Some(v) = g.t {
        c.t = v;
    }
    if g.renormalize {
        c.renormalize_kraus = true;
    }
    if let Some(out) = &g.out {
        c.out_dir = Some(out.display().to_string());
    }
    c.validate()?;
    Ok(c)
}

fn out_dir(c: &RunConfig) -> PathBuf {
    PathBuf::from(c.out_dir.clone().unwrap_or_else(|| "sznagy-out".into()))
}

fn list(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn fmt_values(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

fn print_kraus(k: &KrausSet) {
    println!(
        "{} Kraus operators, completeness defect {:.3e}",
        k.len(),
        k.completeness_defect()
    );
    println!("operator norms: {}", fmt_values(&k.operator_norms()));
}

fn load_kraus(path: Option<&Path>, config: &RunConfig) -> Result<KrausSet> {
    match path {
        Some(p) => {
            let set = KrausSet::experimental(read_kraus_file(p)?)?;
            if config.renormalize_kraus {
                set.renormalized()
            } else {
                Ok(set)
            }
        }
        None => Ok(gen_channel(config)?.kraus),
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = build_config(&cli.global)?;
    let dir = out_dir(&config);
    match cli.command {
        Command::GenChannel => {
            let ch = gen_channel(&config)?;
            print_kraus(&ch.kraus);
            fs::create_dir_all(&dir)?;
            list(&write_channel(&ch, &dir)?);
        }
        Command::Kraus { chi } => {
            let chi = match chi {
                Some(p) => ChiMatrix::new(read_matrix_file(&p, "chi")?)?,
                None => gen_channel(&config)?.chi,
            };
            let k = chi_to_kraus(&chi)?;
            print_kraus(&k);
            let path = dir.join("kraus.json");
            write_json(&path, &KrausFile::from_operators(k.operators()))?;
            list(&[path]);
        }
        Command::Dilate { kraus } => {
            let k = load_kraus(kraus.as_deref(), &config)?;
            let mut files = Vec::new();
            for (i, a) in k.operators().iter().enumerate() {
                let u = dilate_indexed(a, i)?;
                println!("U_A{}: unitarity defect {:.3e}", i + 1, u.unitarity_defect());
                let path = dir.join(format!("unitary_A{}.json", i + 1));
                write_json(&path, &MatrixFile::new("unitary", &u.matrix))?;
                files.push(path);
            }
            list(&files);
        }
        Command::Decompose { unitary } => {
            let u = read_matrix_file(&unitary, "unitary")?;
            let c = decompose_unitary(&u)?.reexpressed(RotationConvention::NATIVE, config.convention);
            let d = phase_distance(&circuit_unitary(&c, config.convention), &u);
            println!(
                "{} CNOT, {} rotations, phase distance {d:.3e} ({})",
                c.cnot_count(),
                c.rotation_count(),
                config.convention
            );
            let stem = unitary.file_stem().and_then(|s| s.to_str()).unwrap_or("circuit");
            let path = dir.join(format!("{stem}.gates"));
            fs::create_dir_all(&dir)?;
            fs::write(&path, serialize_gate_list(&c))?;
            list(&[path]);
        }
        Command::Simulate { gates } => {
            let unitaries = gates
                .iter()
                .map(|p| -> Result<CMatrix> {
                    let c = parse_gate_list(&fs::read_to_string(p)?)?;
                    Ok(circuit_unitary(&c, config.convention))
                })
                .collect::<Result<Vec<_>>>()?;
            let basis = InputBasis::new();
            let outputs = basis
                .states()
                .iter()
                .map(|phi| {
                    unitaries.iter().try_fold(CMatrix::zeros(SYSTEM_DIM, SYSTEM_DIM), |acc, u| {
                        Ok::<_, Error>(&acc + &project_through(u, phi)?.block)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut rec = TomographyRecord::new(basis.density_matrices(), outputs)?;
            if config.noise_sigma > 0.0 {
                rec = add_record_noise(&rec, config.noise_sigma, config.seed);
            }
            for (label, o) in basis.labels().iter().zip(rec.outputs()) {
                println!("{label}: trace {:.6}", o.trace().re);
            }
            let path = dir.join("record.json");
            write_json(&path, &rec)?;
            list(&[path]);
        }
        Command::Qpt { record, method, target } => {
            let rec: TomographyRecord = read_json(&record)?;
            let chi = match method {
                Method::Linear => linear_inversion_qpt(&rec)?,
                Method::Cptp => {
                    let fit = cptp_project_qpt_detailed(&rec)?;
                    println!(
                        "cptp: {} iterations, min eigenvalue {:.3e}, trace-preservation defect {:.3e}",
                        fit.iterations, fit.min_eigenvalue, fit.tp_defect
                    );
                    fit.chi
                }
            };
            println!("objective {:.6e}", qpt_objective(&rec, &chi));
            let eig = chi.eigen()?;
            println!("χ eigenvalues: {}", fmt_values(&eig.values));
            if let Some(t) = target {
                let target = ChiMatrix::new(read_matrix_file(&t, "chi")?)?;
                println!("process fidelity {:.10}", process_fidelity(&target, &chi)?);
            }
            let path = dir.join("chi.json");
            write_json(&path, &MatrixFile::new("chi", chi.matrix()))?;
            list(&[path]);
        }
        Command::Reproduce { experiment, kraus_file } => {
            let mut config = config;
            if let Some(p) = kraus_file {
                config.kraus_file = Some(p.display().to_string());
            }
            let report = match experiment {
                Which::PhaseDamping => reproduce_phase_damping(&config)?,
                Which::Mfgp => reproduce_mfgp(&config)?,
            };
            println!(
                "{}: process fidelity {:.10} (hardware reference {:.4}, {})",
                report.experiment,
                report.process_fidelity,
                report.reference.process_fidelity,
                report.reference.source
            );
            let min_f = report.per_state_fidelities.iter().copied().fold(f64::INFINITY, f64::min);
            println!("minimum per-state fidelity {min_f:.10}");
            for g in &report.gate_counts {
                println!(
                    "U_A{}: {} CNOT, {} rotations, rebuild distance {:.3e}",
                    g.kraus_index + 1,
                    g.counts.cnot,
                    g.counts.rotation,
                    g.rebuild_distance
                );
            }
            list(&emit_report(&report, &dir)?);
        }
        Command::VerifyAppendix => {
            let report = verify_appendix(&config)?;
            let conventions = RotationConvention::all();
            let header: Vec<&str> = conventions.iter().map(|c| c.id()).collect();
            println!("{:<14} {:<5} {:>10} {:>10} {:>10} {:>10}  self-check", "set", "name", header[0], header[1], header[2], header[3]);
            for e in &report.entries {
                let d: Vec<String> = e.distances.iter().map(|d| format!("{:.3e}", d.distance)).collect();
                println!(
                    "{:<14} {:<5} {:>10} {:>10} {:>10} {:>10}  {:.1e}",
                    e.set,
                    e.name.trim_start_matches("U_"),
                    d[0],
                    d[1],
                    d[2],
                    d[3],
                    e.self_check.distance
                );
            }
            println!(
                "θ₁ of U_A1: gate list {:.4}, figure {:.5}, difference {:.1e}",
                report.theta1_check.gate_list_value, report.theta1_check.figure_value, report.theta1_check.difference
            );
            list(&emit_appendix_report(&report, &dir)?);
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
