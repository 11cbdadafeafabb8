//! Seed-level orchestration shared by the CLI and the test suites.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use slrf_core::rng::{substream, Purpose};
use slrf_core::{
    partition, run_baseline_with_model, run_sequential_with_model, Dataset, LoopConfig, Model, Partition, RunResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSizes {
    pub initial: usize,
    pub candidate: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self { initial: 25, candidate: 460, test: 200 }
    }
}

impl SplitSizes {
    pub fn as_tuple(self) -> (usize, usize, usize) {
        (self.initial, self.candidate, self.test)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sequential,
    Baseline,
    Both,
}

impl Mode {
    pub fn sequential(self) -> bool {
        matches!(self, Self::Sequential | Self::Both)
    }

    pub fn baseline(self) -> bool {
        matches!(self, Self::Baseline | Self::Both)
    }
}

/// The partition a seed uses. Sequential and baseline runs of one seed share it.
pub fn split_for_seed(dataset: &Dataset, sizes: SplitSizes, seed: u64) -> slrf_core::Result<Partition> {
    partition(dataset, sizes.as_tuple(), &mut substream(seed, Purpose::Split, 0))
}

/// Everything produced for one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    pub seed: u64,
    pub sequential: Option<RunResult>,
    /// One result per requested baseline size, in request order.
    pub baselines: Vec<RunResult>,
    /// Final models, when requested: the sequential one first, then baselines.
    pub models: Vec<Model>,
}

/// What to run for each seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan<'a> {
    pub sizes: SplitSizes,
    pub config: &'a LoopConfig,
    pub mode: Mode,
    pub baseline_sizes: &'a [usize],
    pub keep_models: bool,
}

pub fn run_seed(dataset: &Dataset, plan: &Plan<'_>, seed: u64) -> slrf_core::Result<SeedOutcome> {
    let part = split_for_seed(dataset, plan.sizes, seed)?;
    let mut models = Vec::new();
    let mut keep = |m: Model| {
        if plan.keep_models {
            models.push(m);
        }
    };
    let sequential = if plan.mode.sequential() {
        let (r, m) = run_sequential_with_model(dataset, &part, plan.config, seed)?;
        keep(m);
        Some(r)
    } else {
        None
    };
    let mut baselines = Vec::new();
    if plan.mode.baseline() {
        for &n in plan.baseline_sizes {
            let (r, m) = run_baseline_with_model(dataset, &part, n, plan.config, seed)?;
            keep(m);
            baselines.push(r);
        }
    }
    Ok(SeedOutcome { seed, sequential, baselines, models })
}

/// Runs every seed in parallel; results come back in seed order.
pub fn run_seeds(dataset: &Dataset, plan: &Plan<'_>, seeds: &[u64]) -> slrf_core::Result<Vec<SeedOutcome>> {
    seeds.par_iter().map(|&s| run_seed(dataset, plan, s)).collect()
}

/// Seed of run `r` under a master seed.
pub fn run_seed_value(master: u64, run: usize) -> u64 {
    master.wrapping_add(run as u64)
}

/// Training size at which `curve` first reaches `target` accuracy.
pub fn crossing_size(curve: &RunResult, target: f64) -> Option<usize> {
    curve.records.iter().find(|r| r.accuracy >= target).map(|r| r.train_size)
}
