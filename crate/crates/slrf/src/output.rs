//! Run files on disk.
//!
//! Layout under the output directory:
//!
//! ```text
//! runs/<label>-seed<seed>-<hash>.json   one RunResult each
//! runs/<label>-seed<seed>-<hash>.csv    its learning curve
//! models/<label>-seed<seed>-<hash>.json final model (optional)
//! summary-<hash>.json                   aggregate of every run in this invocation
//! config-<hash>.toml                    the effective configuration
//! dataset-stats-<hash>.csv              per-feature summary statistics
//! ```
//!
//! `<label>` is `sequential` or `baseline<n>`, with `n` the baseline training size.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use serde::{Deserialize, Serialize};
use slrf_core::{Dataset, RunMode, RunResult};

pub const RUN_FORMAT: &str = "slrf-run";
pub const RUN_VERSION: u32 = 1;
pub const CURVE_HEADER: &str = "iteration,train_size,accuracy,precision,recall,f1,lcs,distance";

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFile {
    pub format: String,
    pub version: u32,
    pub config_hash: String,
    /// Family label: `RF`, `DT` or `GB`.
    pub family: String,
    pub class_names: Vec<String>,
    pub run: RunResult,
}

impl RunFile {
    pub fn new(config_hash: &str, class_names: &[String], run: RunResult) -> Self {
        Self {
            format: RUN_FORMAT.to_owned(),
            version: RUN_VERSION,
            config_hash: config_hash.to_owned(),
            family: run.classifier.family().to_owned(),
            class_names: class_names.to_vec(),
            run,
        }
    }

    /// `sequential` or `baseline<n>`.
    pub fn label(&self) -> String {
        run_label(&self.run)
    }

    pub fn stem(&self) -> String {
        format!("{}-seed{}-{}", self.label(), self.run.seed, self.config_hash)
    }
}

pub fn run_label(run: &RunResult) -> String {
    match run.mode {
        RunMode::Sequential => "sequential".to_owned(),
        RunMode::Baseline => format!("baseline{}", run.final_train_size),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Learning curve as CSV; absent LCS and distance (iteration 0, baselines) are empty cells.
pub fn curve_csv(run: &RunResult) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in &run.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.iteration,
            r.train_size,
            r.accuracy,
            r.precision,
            r.recall,
            r.f1,
            cell(r.lcs),
            cell(r.distance)
        ));
    }
    out
}

/// Writes the run JSON and its curve CSV into `dir`; returns the JSON path.
pub fn write_run(dir: &Path, file: &RunFile) -> Result<PathBuf> {
    let stem = file.stem();
    let json = dir.join(format!("{stem}.json"));
    write_atomic(&json, serde_json::to_string_pretty(file)?.as_bytes())?;
    write_atomic(&dir.join(format!("{stem}.csv")), curve_csv(&file.run).as_bytes())?;
    Ok(json)
}

pub fn read_run(path: &Path) -> Result<RunFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: RunFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    ensure!(file.format == RUN_FORMAT, "{}: not a run file", path.display());
    ensure!(file.version == RUN_VERSION, "{}: unsupported run file version {}", path.display(), file.version);
    Ok(file)
}

/// Every run file under `dir/runs`, sorted by file name.
pub fn read_runs(dir: &Path) -> Result<Vec<RunFile>> {
    let runs = dir.join("runs");
    let mut paths: Vec<PathBuf> = match std::fs::read_dir(&runs) {
        Ok(entries) => entries
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e).with_context(|| format!("listing {}", runs.display())),
    };
    paths.sort();
    paths.iter().map(|p| read_run(p)).collect()
}

/// Per-feature `min,max,mean,std` table, a blank line, then per-class counts.
pub fn dataset_stats_csv(dataset: &Dataset) -> String {
    let schema = dataset.schema();
    let n = dataset.len() as f64;
    let mut out = String::from("feature,min,max,mean,std\n");
    for (j, name) in schema.feature_names.iter().enumerate() {
        let col: Vec<f64> = dataset.samples().iter().map(|s| s.features[j]).collect();
        if col.is_empty() {
            out.push_str(&format!("{name},,,,\n"));
            continue;
        }
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = col.iter().sum::<f64>() / n;
        let var = if col.len() > 1 { col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        out.push_str(&format!("{name},{min},{max},{mean},{}\n", var.sqrt()));
    }
    out.push_str("\nclass,count\n");
    for (k, name) in schema.class_names.iter().enumerate() {
        let count = dataset.samples().iter().filter(|s| s.label == k).count();
        out.push_str(&format!("{name},{count}\n"));
    }
    out
}
