//! Run reports: canonical JSON (sorted keys, no timestamps) plus CSV
//! mirrors of the benchmark tables. Wall-clock timing goes to a separate
//! meta file so the report itself is byte-stable across reruns.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use qsvm_core::svm::Metrics;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Fully resolved configuration, seeds included.
    pub config: Value,
    /// Command-specific results.
    pub results: Value,
    /// Paths written by this run, relative to the output directory.
    pub artifacts: Vec<String>,
}

/// Serialize with sorted keys via the Value round-trip.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = serde_json::to_string_pretty(&v).expect("serializable");
    out.push('\n');
    out
}

pub fn write_report(
    dir: &Path,
    report: &RunReport,
    started: std::time::Instant,
) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("report.json");
    fs::write(&path, canonical_json(report))?;
    // Timing lives outside the deterministic report.
    let meta = serde_json::json!({
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    fs::write(dir.join("run_meta.json"), canonical_json(&meta))?;
    Ok(path)
}

pub fn metrics_csv_row(name: &str, m: &Metrics) -> String {
    format!(
        "{name},{:.6},{:.6},{:.6},{:.6}\n",
        m.accuracy, m.precision, m.recall, m.f1
    )
}

pub const METRICS_CSV_HEADER: &str = "model,accuracy,precision,recall,f1\n";
