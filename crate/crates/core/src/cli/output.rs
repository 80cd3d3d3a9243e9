//! Writing results as CSV and JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::Formats;
use crate::harness::{DatasetErrors, ExperimentResult, PlotPanel, Report};
use crate::Result;

pub const OUT_DIR_ENV: &str = "DETRACE_OUT_DIR";

/// `$DETRACE_OUT_DIR`, else `./detrace-out`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("detrace-out"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per (experiment, classifier). Floats use the shortest
/// representation that parses back to the same value.
pub fn write_results_csv<W: Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "experiment_id",
        "classifier",
        "median_error_pct",
        "se_pct",
        "reps",
        "theory_pred_pct",
    ])?;
    for r in results {
        for s in &r.classifiers {
            out.write_record([
                r.experiment_id.clone(),
                s.classifier.name().to_string(),
                s.median_error_pct.to_string(),
                opt(s.se_defined.then_some(s.se_pct)),
                r.reps.to_string(),
                opt(s.theory_pred_pct),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_comparison_csv<W: Write>(report: &Report, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "setting",
        "column",
        "produced_median",
        "produced_se",
        "quoted_median",
        "quoted_se",
        "theory_pct",
    ])?;
    for r in &report.rows {
        out.write_record([
            r.setting.clone(),
            r.column.clone(),
            opt(r.produced_median),
            opt(r.produced_se),
            opt(r.quoted_median),
            opt(r.quoted_se),
            opt(r.theory_pct),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_panel_csv<W: Write>(panel: &PlotPanel, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&panel.columns)?;
    for row in &panel.rows {
        out.write_record(row.iter().map(f64::to_string))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_dataset_errors_csv<W: Write>(errors: &[DatasetErrors], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "classifier",
        "train_errors",
        "train_n",
        "test_errors",
        "test_n",
    ])?;
    for e in errors {
        out.write_record([
            e.classifier.name().to_string(),
            e.train_errors.to_string(),
            e.train_n.to_string(),
            e.test_errors.to_string(),
            e.test_n.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn create(dir: &Path, name: &str, written: &mut Vec<PathBuf>) -> Result<fs::File> {
    let path = dir.join(name);
    let f = fs::File::create(&path)?;
    written.push(path);
    Ok(f)
}

/// Writes `<id>_results.csv` and `<id>_results.json`; returns the paths written.
pub fn emit_results(
    result: &ExperimentResult,
    formats: Formats,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let id = &result.experiment_id;
    if formats.csv {
        let f = create(dir, &format!("{id}_results.csv"), &mut written)?;
        write_results_csv(std::slice::from_ref(result), f)?;
    }
    if formats.json {
        let f = create(dir, &format!("{id}_results.json"), &mut written)?;
        serde_json::to_writer_pretty(f, result)?;
    }
    Ok(written)
}

/// Writes the per-experiment results, the comparison table, plot data for
/// figures and a JSON report.
pub fn emit_report(report: &Report, formats: Formats, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let name = report.target.name();
    if formats.csv {
        let f = create(dir, &format!("{name}_results.csv"), &mut written)?;
        write_results_csv(&report.experiments, f)?;
        let f = create(dir, &format!("{name}_comparison.csv"), &mut written)?;
        write_comparison_csv(report, f)?;
        for panel in &report.panels {
            let f = create(dir, &format!("{}.csv", panel.name), &mut written)?;
            write_panel_csv(panel, f)?;
        }
    }
    if formats.json {
        let f = create(dir, &format!("{name}_report.json"), &mut written)?;
        serde_json::to_writer_pretty(f, report)?;
    }
    Ok(written)
}
