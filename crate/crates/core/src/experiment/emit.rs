use std::fs;
use std::path::{Path, PathBuf};

use super::{AppendixReport, ComplexArrays, ExperimentReport, GeneratedChannel};
use crate::channel::basis_label;
use crate::error::Result;
use crate::io::{write_json, KrausFile, MatrixFile};

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn write_array(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["row".to_owned()];
    header.extend((0..rows.len()).map(basis_label));
    w.write_record(&header)?;
    for (i, row) in rows.iter().enumerate() {
        let mut rec = vec![basis_label(i)];
        rec.extend(row.iter().copied().map(num));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn write_chi(dir: &Path, stem: &str, a: &ComplexArrays, files: &mut Vec<PathBuf>) -> Result<()> {
    for (part, rows) in [("re", &a.re), ("im", &a.im)] {
        let p = dir.join(format!("{stem}_{part}.csv"));
        write_array(&p, rows)?;
        files.push(p);
    }
    Ok(())
}

/// Writes `report.json` and the CSV tables into `dir`. Returns the files written.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    let p = dir.join("report.json");
    write_json(&p, report)?;
    files.push(p);

    let hw = &report.reference;
    let k = report.per_state_overlaps.first().map_or(0, Vec::len);
    let p = dir.join("per_state_overlaps.csv");
    let mut w = csv_writer(&p)?;
    let mut header = vec!["state".to_owned()];
    header.extend((1..=k).map(|i| format!("A{i}")));
    header.extend(hw.per_state_overlaps.columns.iter().map(|c| format!("hardware_{c}")));
    w.write_record(&header)?;
    for (s, row) in report.per_state_overlaps.iter().enumerate() {
        let mut rec = vec![report.states[s].clone()];
        rec.extend(row.iter().copied().map(num));
        rec.extend(hw.per_state_overlaps.values[s].iter().copied().map(num));
        w.write_record(&rec)?;
    }
    w.flush()?;
    files.push(p);

    let p = dir.join("per_state_fidelities.csv");
    let mut w = csv_writer(&p)?;
    w.write_record(["state", "fidelity", "hardware_fidelity"])?;
    for (s, f) in report.per_state_fidelities.iter().enumerate() {
        w.write_record([
            report.states[s].clone(),
            num(*f),
            num(hw.per_state_fidelities.values[s][0]),
        ])?;
    }
    w.flush()?;
    files.push(p);

    write_chi(dir, "chi_target", &report.chi_target, &mut files)?;
    write_chi(dir, "chi_simulated", &report.chi_simulated, &mut files)?;

    let p = dir.join("gate_counts.csv");
    let mut w = csv_writer(&p)?;
    w.write_record(["kraus_index", "cnot", "rotation", "rebuild_distance", "unitarity_defect", "published_cnot"])?;
    for g in &report.gate_counts {
        let published = hw
            .published_cnots
            .get(g.kraus_index)
            .map_or(String::new(), |c| c.to_string());
        w.write_record([
            g.kraus_index.to_string(),
            g.counts.cnot.to_string(),
            g.counts.rotation.to_string(),
            num(g.rebuild_distance),
            num(g.unitarity_defect),
            published,
        ])?;
    }
    w.flush()?;
    files.push(p);

    for g in &report.gate_counts {
        let p = dir.join(format!("circuit_A{}.gates", g.kraus_index + 1));
        fs::write(&p, &g.gate_list)?;
        files.push(p);
    }
    Ok(files)
}

/// Writes `appendix_report.json` and a convention distance table.
pub fn emit_appendix_report(report: &AppendixReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let p_json = dir.join("appendix_report.json");
    write_json(&p_json, report)?;

    let p_csv = dir.join("convention_distances.csv");
    let mut w = csv_writer(&p_csv)?;
    let mut header = vec!["set".to_owned(), "name".to_owned()];
    if let Some(e) = report.entries.first() {
        header.extend(e.distances.iter().map(|d| d.convention.id().to_owned()));
    }
    header.extend(["best".into(), "self_check".into(), "published_cnot".into(), "our_cnot".into()]);
    w.write_record(&header)?;
    for e in &report.entries {
        let mut rec = vec![e.set.clone(), e.name.clone()];
        rec.extend(e.distances.iter().map(|d| num(d.distance)));
        rec.push(e.best.convention.id().into());
        rec.push(num(e.self_check.distance));
        rec.push(e.published_counts.cnot.to_string());
        rec.push(e.self_check.counts.cnot.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(vec![p_json, p_csv])
}

/// Writes `superoperator.json`, `chi.json` and `kraus.json`.
pub fn write_channel(ch: &GeneratedChannel, dir: &Path) -> Result<Vec<PathBuf>> {
    let files = vec![dir.join("superoperator.json"), dir.join("chi.json"), dir.join("kraus.json")];
    write_json(&files[0], &MatrixFile::new("superoperator", ch.superoperator.matrix()))?;
    write_json(&files[1], &MatrixFile::new("chi", ch.chi.matrix()))?;
    let mut k = KrausFile::from_operators(ch.kraus.operators());
    k.source = Some("generator".into());
    write_json(&files[2], &k)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{reproduce_phase_damping, RunConfig};
    use crate::io::read_json;

    #[test]
    fn report_files_round_trip_and_are_stable() {
        let report = reproduce_phase_damping(&RunConfig::default()).unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let fa = emit_report(&report, a.path()).unwrap();
        let again = reproduce_phase_damping(&RunConfig::default()).unwrap();
        let fb = emit_report(&again, b.path()).unwrap();
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
        let back: ExperimentReport = read_json(&a.path().join("report.json")).unwrap();
        assert_eq!(back, report);

        let text = fs::read_to_string(a.path().join("per_state_fidelities.csv")).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 16);
        for r in rows {
            let f: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
            assert!(f >= 0.99999999);
        }
    }
}
