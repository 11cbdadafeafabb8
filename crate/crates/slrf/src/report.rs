//! Cross-run aggregate tables.
//!
//! Runs are grouped by (config hash, label), so sequential runs and each
//! baseline size aggregate separately. Groups from the same config pair up
//! into comparison rows: `SL-<family>+` against `Traditional <family>` at the
//! sequential run's final training size.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use slrf_core::seqloop::BoxStats;
use slrf_core::{aggregate_runs, RunMode, RunResult, Summary};

use crate::output::{write_atomic, RunFile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub config_hash: String,
    pub family: String,
    /// `sequential` or `baseline<n>`.
    pub label: String,
    pub mode: RunMode,
    pub train_size: usize,
    pub class_names: Vec<String>,
    pub seeds: Vec<u64>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub config_hash: String,
    pub train_size: usize,
    pub n_runs: usize,
    /// Mean accuracy, macro precision, macro recall, macro F1.
    pub mean: [f64; 4],
    pub std: [f64; 4],
    /// Mean weighted precision, recall, F1.
    pub weighted: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub config_hash: String,
    pub train_size: usize,
    /// Sequential mean and std accuracy where the learning curve has this size.
    pub sequential: Option<(f64, f64)>,
    pub traditional: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub groups: Vec<GroupSummary>,
    pub comparison: Vec<ComparisonRow>,
    pub sweep: Vec<SweepRow>,
}

impl Report {
    pub fn build(files: &[RunFile]) -> Result<Self> {
        if files.is_empty() {
            bail!("no run results to report on");
        }
        let mut grouped: BTreeMap<(String, usize, String), Vec<&RunFile>> = BTreeMap::new();
        for f in files {
            // Sort key puts sequential first, then baselines by size.
            let order = match f.run.mode {
                RunMode::Sequential => 0,
                RunMode::Baseline => f.run.final_train_size + 1,
            };
            grouped.entry((f.config_hash.clone(), order, f.label())).or_default().push(f);
        }

        let mut groups = Vec::new();
        for ((hash, _, label), mut members) in grouped {
            members.sort_by_key(|f| f.run.seed);
            let runs: Vec<RunResult> = members.iter().map(|f| f.run.clone()).collect();
            let summary =
                aggregate_runs(&runs).with_context(|| format!("aggregating {label} runs of config {hash}"))?;
            let first = members[0];
            groups.push(GroupSummary {
                config_hash: hash,
                family: first.family.clone(),
                label,
                mode: first.run.mode,
                train_size: first.run.final_train_size,
                class_names: first.class_names.clone(),
                seeds: runs.iter().map(|r| r.seed).collect(),
                summary,
            });
        }

        let row = |g: &GroupSummary, model: String| ComparisonRow {
            model,
            config_hash: g.config_hash.clone(),
            train_size: g.train_size,
            n_runs: g.summary.n_runs,
            mean: g.summary.final_mean,
            std: g.summary.final_std,
            weighted: g.summary.final_weighted_mean,
        };
        let mut comparison = Vec::new();
        let mut sweep = Vec::new();
        for seq in groups.iter().filter(|g| g.mode == RunMode::Sequential) {
            let same_config = |g: &&GroupSummary| g.config_hash == seq.config_hash && g.mode == RunMode::Baseline;
            comparison.push(row(seq, format!("SL-{}+", seq.family)));
            if let Some(base) = groups.iter().filter(same_config).find(|g| g.train_size == seq.train_size) {
                comparison.push(row(base, format!("Traditional {}", base.family)));
            }
        }
        let hashes: BTreeSet<&String> = groups.iter().map(|g| &g.config_hash).collect();
        for hash in hashes {
            let seq = groups.iter().find(|g| &g.config_hash == hash && g.mode == RunMode::Sequential);
            for base in groups.iter().filter(|g| &g.config_hash == hash && g.mode == RunMode::Baseline) {
                let sequential = seq.and_then(|s| {
                    s.summary.curve.iter().find(|p| p.train_size == base.train_size).map(|p| (p.mean[0], p.std[0]))
                });
                sweep.push(SweepRow {
                    family: base.family.clone(),
                    config_hash: hash.clone(),
                    train_size: base.train_size,
                    sequential,
                    traditional: Some((base.summary.final_mean[0], base.summary.final_std[0])),
                });
            }
        }
        Ok(Self { groups, comparison, sweep })
    }

    /// Writes every table into `dir` (created if needed).
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for g in &self.groups {
            let stem = format!("{}-{}", g.label, g.config_hash);
            write_atomic(&dir.join(format!("{stem}-curve.csv")), curve_table(&g.summary).as_bytes())?;
            write_atomic(&dir.join(format!("{stem}-confusion.csv")), confusion_table(g).as_bytes())?;
            write_atomic(&dir.join(format!("{stem}-classwise.csv")), classwise_table(g).as_bytes())?;
            write_atomic(&dir.join(format!("{stem}-boxplot.csv")), boxplot_table(&g.summary).as_bytes())?;
        }
        write_atomic(&dir.join("comparison.csv"), comparison_table(&self.comparison).as_bytes())?;
        write_atomic(&dir.join("sample-size-sweep.csv"), sweep_table(&self.sweep).as_bytes())?;
        write_atomic(&dir.join("report.json"), serde_json::to_string_pretty(self)?.as_bytes())?;
        Ok(())
    }

    /// Fixed-width comparison table for the terminal.
    pub fn render_comparison(&self) -> String {
        let mut out = format!(
            "{:<16} {:>6} {:>5}  {:>8} {:>9} {:>8} {:>8}\n",
            "model", "n", "runs", "accuracy", "precision", "recall", "f1"
        );
        for r in &self.comparison {
            let _ = writeln!(
                out,
                "{:<16} {:>6} {:>5}  {:>8.4} {:>9.4} {:>8.4} {:>8.4}",
                r.model, r.train_size, r.n_runs, r.mean[0], r.mean[1], r.mean[2], r.mean[3]
            );
        }
        out
    }
}

const METRICS: [&str; 4] = ["accuracy", "precision", "recall", "f1"];

pub fn curve_table(s: &Summary) -> String {
    let mut out = String::from("iteration,train_size");
    for m in METRICS {
        let _ = write!(out, ",{m}_mean,{m}_std");
    }
    out.push('\n');
    for p in &s.curve {
        let _ = write!(out, "{},{}", p.iteration, p.train_size);
        for k in 0..4 {
            let _ = write!(out, ",{},{}", p.mean[k], p.std[k]);
        }
        out.push('\n');
    }
    out
}

/// Mean counts; rows are true classes, columns predicted.
pub fn confusion_table(g: &GroupSummary) -> String {
    let mut out = String::from("true\\predicted");
    for c in &g.class_names {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (name, row) in g.class_names.iter().zip(&g.summary.mean_confusion) {
        out.push_str(name);
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn classwise_table(g: &GroupSummary) -> String {
    let s = &g.summary;
    let mut out = String::from("class,precision,recall,f1\n");
    for (k, name) in g.class_names.iter().enumerate() {
        let _ = writeln!(out, "{name},{},{},{}", s.class_precision[k], s.class_recall[k], s.class_f1[k]);
    }
    out
}

pub fn boxplot_table(s: &Summary) -> String {
    let mut out = String::from("metric,min,q1,median,q3,max\n");
    for (m, BoxStats { min, q1, median, q3, max }) in METRICS.iter().zip(&s.final_box) {
        let _ = writeln!(out, "{m},{min},{q1},{median},{q3},{max}");
    }
    out
}

pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(
        "model,config_hash,train_size,n_runs,accuracy,precision,recall,f1,\
         accuracy_std,precision_std,recall_std,f1_std,weighted_precision,weighted_recall,weighted_f1\n",
    );
    for r in rows {
        let _ = write!(out, "{},{},{},{}", r.model, r.config_hash, r.train_size, r.n_runs);
        for v in r.mean.iter().chain(&r.std).chain(&r.weighted) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let pair = |p: Option<(f64, f64)>| p.map(|(m, s)| format!("{m},{s}")).unwrap_or_else(|| ",".to_owned());
    let mut out =
        String::from("family,config_hash,train_size,sequential_mean,sequential_std,traditional_mean,traditional_std\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.family,
            r.config_hash,
            r.train_size,
            pair(r.sequential),
            pair(r.traditional)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::tests::fake_run;

    fn file(hash: &str, run: RunResult) -> RunFile {
        RunFile::new(hash, &["a".to_owned(), "b".to_owned()], run)
    }

    #[test]
    fn single_run_report_equals_run() {
        let run = fake_run(3, RunMode::Sequential, &[0.5, 0.7, 0.9]);
        let r = Report::build(&[file("h", run.clone())]).unwrap();
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].summary.final_mean, run.records[2].headline());
        assert_eq!(r.comparison.len(), 1);
        assert_eq!(r.comparison[0].model, "SL-RF+");
        assert!(r.sweep.is_empty());
    }

    #[test]
    fn pairs_sequential_with_matching_baseline() {
        let mut files = Vec::new();
        for seed in 0..3 {
            files.push(file("h", fake_run(seed, RunMode::Sequential, &[0.5, 0.6, 0.8])));
            let mut b = fake_run(seed, RunMode::Baseline, &[0.7]);
            b.final_train_size = 12;
            b.records[0].train_size = 12;
            files.push(file("h", b.clone()));
            b.final_train_size = 11;
            b.records[0].train_size = 11;
            b.records[0].accuracy = 0.65;
            files.push(file("h", b));
        }
        let r = Report::build(&files).unwrap();
        let labels: Vec<&str> = r.groups.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["sequential", "baseline11", "baseline12"]);
        let models: Vec<&str> = r.comparison.iter().map(|c| c.model.as_str()).collect();
        assert_eq!(models, ["SL-RF+", "Traditional RF"]);
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(r.comparison[1].mean[0], 0.7));
        assert_eq!(r.sweep.len(), 2);
        let (m, s) = r.sweep[0].sequential.unwrap();
        assert!(close(m, 0.6) && close(s, 0.0));
        let (m, s) = r.sweep[0].traditional.unwrap();
        assert!(close(m, 0.65) && close(s, 0.0));
        assert!(comparison_table(&r.comparison).lines().nth(1).unwrap().starts_with("SL-RF+,h,12,3,"));
    }

    #[test]
    fn mixed_shapes_and_empty_input_fail() {
        let files = [
            file("h", fake_run(0, RunMode::Sequential, &[0.5, 0.6])),
            file("h", fake_run(1, RunMode::Sequential, &[0.5, 0.6, 0.7])),
        ];
        let err = format!("{:#}", Report::build(&files).unwrap_err());
        assert!(err.contains("aggregation error"), "{err}");
        assert!(Report::build(&[]).is_err());
    }

    #[test]
    fn tables_have_headers_and_class_rows() {
        let r = Report::build(&[file("h", fake_run(0, RunMode::Sequential, &[0.5, 0.6]))]).unwrap();
        let g = &r.groups[0];
        assert_eq!(confusion_table(g), "true\\predicted,a,b\na,3,1\nb,0,4\n");
        assert_eq!(classwise_table(g).lines().count(), 3);
        assert!(boxplot_table(&g.summary).starts_with("metric,min,q1,median,q3,max\naccuracy,0.6,0.6,0.6,0.6,0.6\n"));
        assert_eq!(curve_table(&g.summary).lines().count(), 3);
        let dir = tempfile::tempdir().unwrap();
        r.write(dir.path()).unwrap();
        assert!(dir.path().join("sequential-h-curve.csv").exists());
        assert!(dir.path().join("comparison.csv").exists());
    }
}
