//! The sequential acquire-and-retrain loop, the one-shot random baseline,
//! and cross-run aggregation.
//!
//! Per iteration: draw `M` Sobol probes scaled to the frozen feature bounds,
//! take the probe the current model is least confident about, move the
//! nearest real candidate into the training set, retrain from scratch, and
//! evaluate on the untouched test set.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::acquisition::{acquire, AcquisitionResult};
use crate::classifier::{ClassifierSpec, Model};
use crate::dataset::{Dataset, FeatureBounds, Partition, Sample};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, ConfusionMatrix, Metrics};
use crate::rng::{substream, Purpose};
use crate::sobol::SobolStream;
use crate::tuning::{grid_search, ParamGrid};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct LoopConfig {
    /// Iterations N; one candidate is acquired per iteration.
    pub budget: usize,
    /// Synthetic probes M per iteration.
    pub synthetic_per_iteration: usize,
    pub classifier: ClassifierSpec,
    /// Tuned once per run on the starting training set when present.
    pub grid: Option<ParamGrid>,
    pub folds: usize,
    /// Restart the Sobol stream every iteration instead of continuing it.
    pub fresh_sobol_per_iteration: bool,
    pub eval_every: usize,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            budget: 250,
            synthetic_per_iteration: 1000,
            classifier: ClassifierSpec::default(),
            grid: None,
            folds: 5,
            fresh_sobol_per_iteration: false,
            eval_every: 1,
        }
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<()> {
        if self.synthetic_per_iteration == 0 {
            return Err(Error::Config("synthetic_per_iteration must be at least 1".into()));
        }
        if self.eval_every == 0 {
            return Err(Error::Config("eval_every must be at least 1".into()));
        }
        if self.grid.is_some() && self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RunMode {
    Sequential,
    Baseline,
}

/// Test-set scores after a given iteration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord {
    pub iteration: usize,
    pub train_size: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Least-confidence score of the ideal probe (absent at iteration 0).
    pub lcs: Option<f64>,
    /// Dataset row id of the acquired candidate.
    pub chosen: Option<usize>,
    pub distance: Option<f64>,
}

impl IterationRecord {
    /// `[accuracy, precision, recall, f1]`.
    pub fn headline(&self) -> [f64; 4] {
        [self.accuracy, self.precision, self.recall, self.f1]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Acquisition {
    pub iteration: usize,
    pub id: usize,
    pub lcs: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunResult {
    pub seed: u64,
    pub mode: RunMode,
    /// Hyperparameters actually used (after any grid search).
    pub classifier: ClassifierSpec,
    pub final_train_size: usize,
    pub records: Vec<IterationRecord>,
    /// Every acquisition, including iterations that were not evaluated.
    pub acquisitions: Vec<Acquisition>,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    /// The candidate pool ran dry before the budget was spent.
    pub truncated: bool,
}

/// Live state of one sequential run.
pub struct LoopState<'a> {
    dataset: &'a Dataset,
    config: &'a LoopConfig,
    seed: u64,
    spec: ClassifierSpec,
    training: Vec<usize>,
    pool: Vec<usize>,
    test: Vec<Sample>,
    test_ids: Vec<usize>,
    bounds: FeatureBounds,
    sobol: SobolStream,
    model: Model,
    iteration: usize,
}

impl<'a> LoopState<'a> {
    /// Tunes (if configured) and trains the initial model on `partition.initial`.
    pub fn new(dataset: &'a Dataset, partition: &Partition, config: &'a LoopConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        partition.check(dataset.len())?;
        let n_classes = dataset.schema().n_classes();
        let initial = dataset.select(&partition.initial);
        let spec = resolve_spec(&initial, n_classes, config, seed)?;
        spec.validate(dataset.schema().n_features())?;
        let bounds =
            FeatureBounds::from_samples(partition.initial.iter().chain(&partition.candidate).map(|&i| dataset.get(i)))?;
        let sobol = SobolStream::new(dataset.schema().n_features())?;
        let model = spec.fit(&initial, n_classes, &mut substream(seed, Purpose::Fit, 0))?;
        Ok(Self {
            dataset,
            config,
            seed,
            spec,
            training: partition.initial.clone(),
            pool: partition.candidate.clone(),
            test: dataset.select(&partition.test),
            test_ids: partition.test.clone(),
            bounds,
            sobol,
            model,
            iteration: 0,
        })
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn training_ids(&self) -> &[usize] {
        &self.training
    }

    pub fn pool_ids(&self) -> &[usize] {
        &self.pool
    }

    pub fn test_ids(&self) -> &[usize] {
        &self.test_ids
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn spec(&self) -> &ClassifierSpec {
        &self.spec
    }

    pub fn bounds(&self) -> &FeatureBounds {
        &self.bounds
    }

    /// Test-set record for the current model.
    pub fn record(&self, acquired: Option<&Acquisition>) -> Result<(IterationRecord, ConfusionMatrix, Metrics)> {
        let (cm, m) = evaluate(&self.model, &self.test)?;
        let rec = IterationRecord {
            iteration: self.iteration,
            train_size: self.training.len(),
            accuracy: m.accuracy,
            precision: m.macro_precision,
            recall: m.macro_recall,
            f1: m.macro_f1,
            lcs: acquired.map(|a| a.lcs),
            chosen: acquired.map(|a| a.id),
            distance: acquired.map(|a| a.distance),
        };
        Ok((rec, cm, m))
    }

    /// Acquires one candidate, retrains, and returns the acquisition.
    pub fn step(&mut self) -> Result<Acquisition> {
        if self.pool.is_empty() {
            return Err(Error::PoolExhausted);
        }
        let next = self.iteration + 1;
        if self.config.fresh_sobol_per_iteration {
            self.sobol = SobolStream::new(self.sobol.dim())?;
        }
        let synthetic: Vec<Vec<f64>> =
            (0..self.config.synthetic_per_iteration).map(|_| self.bounds.scale(&self.sobol.next_point())).collect();
        let pool: Vec<Sample> = self.dataset.select(&self.pool);
        let AcquisitionResult { ideal_score, chosen_candidate_index, distance, .. } =
            acquire(&self.model, &synthetic, &pool, &self.bounds)?;

        // `remove` keeps pool order stable, which the lowest-index tie-break relies on.
        let id = self.pool.remove(chosen_candidate_index);
        self.training.push(id);
        let training = self.dataset.select(&self.training);
        self.model = self.spec.fit(
            &training,
            self.dataset.schema().n_classes(),
            &mut substream(self.seed, Purpose::Fit, next as u32),
        )?;
        self.iteration = next;
        Ok(Acquisition { iteration: next, id, lcs: ideal_score, distance })
    }

    /// One loop iteration; returns a record when this iteration is evaluated.
    pub fn run_iteration(&mut self) -> Result<(Acquisition, Option<IterationRecord>)> {
        let acq = self.step()?;
        let due = self.iteration.is_multiple_of(self.config.eval_every) || self.iteration == self.config.budget;
        let rec = if due { Some(self.record(Some(&acq))?.0) } else { None };
        Ok((acq, rec))
    }
}

fn resolve_spec(training: &[Sample], n_classes: usize, config: &LoopConfig, seed: u64) -> Result<ClassifierSpec> {
    match &config.grid {
        Some(grid) => grid_search(
            training,
            n_classes,
            &config.classifier,
            grid,
            config.folds,
            &mut substream(seed, Purpose::GridSearch, 0),
        ),
        None => Ok(config.classifier.clone()),
    }
}

/// Full sequential run: initial model, then `config.budget` iterations.
pub fn run_sequential(dataset: &Dataset, partition: &Partition, config: &LoopConfig, seed: u64) -> Result<RunResult> {
    run_sequential_with_model(dataset, partition, config, seed).map(|(r, _)| r)
}

/// [`run_sequential`], also returning the final model.
pub fn run_sequential_with_model(
    dataset: &Dataset,
    partition: &Partition,
    config: &LoopConfig,
    seed: u64,
) -> Result<(RunResult, Model)> {
    if config.budget > partition.candidate.len() {
        return Err(Error::Config(format!(
            "budget {} exceeds candidate pool of {}",
            config.budget,
            partition.candidate.len()
        )));
    }
    let mut state = LoopState::new(dataset, partition, config, seed)?;
    let (first, mut confusion, mut metrics) = state.record(None)?;
    let mut records = vec![first];
    let mut acquisitions = Vec::with_capacity(config.budget);
    let mut truncated = false;

    while state.iteration() < config.budget {
        let acq = match state.step() {
            Ok(a) => a,
            Err(Error::PoolExhausted) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let it = state.iteration();
        if it % config.eval_every == 0 || it == config.budget {
            let (rec, cm, m) = state.record(Some(&acq))?;
            records.push(rec);
            confusion = cm;
            metrics = m;
        }
        acquisitions.push(acq);
    }
    if truncated && records.last().map(|r| r.iteration) != Some(state.iteration()) {
        let (rec, cm, m) = state.record(acquisitions.last())?;
        records.push(rec);
        confusion = cm;
        metrics = m;
    }

    let result = RunResult {
        seed,
        mode: RunMode::Sequential,
        classifier: state.spec().clone(),
        final_train_size: state.training_ids().len(),
        records,
        acquisitions,
        confusion,
        metrics,
        truncated,
    };
    Ok((result, state.model))
}

/// One-shot model on the initial set plus `n_train - |initial|` random candidates.
pub fn run_baseline(
    dataset: &Dataset,
    partition: &Partition,
    n_train: usize,
    config: &LoopConfig,
    seed: u64,
) -> Result<RunResult> {
    run_baseline_with_model(dataset, partition, n_train, config, seed).map(|(r, _)| r)
}

/// [`run_baseline`], also returning the model.
pub fn run_baseline_with_model(
    dataset: &Dataset,
    partition: &Partition,
    n_train: usize,
    config: &LoopConfig,
    seed: u64,
) -> Result<(RunResult, Model)> {
    config.validate()?;
    partition.check(dataset.len())?;
    let (n_initial, n_candidate, _) = partition.sizes();
    if n_train < n_initial || n_train > n_initial + n_candidate {
        return Err(Error::Config(format!(
            "baseline training size {n_train} outside {n_initial}..={}",
            n_initial + n_candidate
        )));
    }
    let mut picks = partition.candidate.clone();
    picks.shuffle(&mut substream(seed, Purpose::BaselineDraw, 0));
    let mut ids = partition.initial.clone();
    ids.extend_from_slice(&picks[..n_train - n_initial]);

    let n_classes = dataset.schema().n_classes();
    let training = dataset.select(&ids);
    let spec = resolve_spec(&training, n_classes, config, seed)?;
    spec.validate(dataset.schema().n_features())?;
    let model = spec.fit(&training, n_classes, &mut substream(seed, Purpose::Fit, 0))?;
    let (confusion, metrics) = evaluate(&model, &dataset.select(&partition.test))?;
    let record = IterationRecord {
        iteration: 0,
        train_size: n_train,
        accuracy: metrics.accuracy,
        precision: metrics.macro_precision,
        recall: metrics.macro_recall,
        f1: metrics.macro_f1,
        lcs: None,
        chosen: None,
        distance: None,
    };
    let result = RunResult {
        seed,
        mode: RunMode::Baseline,
        classifier: spec,
        final_train_size: n_train,
        records: vec![record],
        acquisitions: Vec::new(),
        confusion,
        metrics,
        truncated: false,
    };
    Ok((result, model))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl BoxStats {
    /// Quartiles by linear interpolation between order statistics.
    pub fn from_values(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos as usize;
            let hi = (lo + 1).min(v.len() - 1);
            v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
        };
        Self { min: v[0], q1: q(0.25), median: q(0.5), q3: q(0.75), max: v[v.len() - 1] }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvePoint {
    pub iteration: usize,
    pub train_size: usize,
    /// `[accuracy, precision, recall, f1]` across runs.
    pub mean: [f64; 4],
    pub std: [f64; 4],
}

/// Cross-run aggregate of congruent runs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub n_runs: usize,
    pub curve: Vec<CurvePoint>,
    pub mean_confusion: Vec<Vec<f64>>,
    pub class_precision: Vec<f64>,
    pub class_recall: Vec<f64>,
    pub class_f1: Vec<f64>,
    pub final_mean: [f64; 4],
    pub final_std: [f64; 4],
    /// Weighted precision, recall, F1 means for comparison with the macro headline.
    pub final_weighted_mean: [f64; 3],
    /// Box statistics of the final accuracy, precision, recall, F1.
    pub final_box: [BoxStats; 4],
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

/// Per-iteration mean and sample standard deviation, mean confusion matrix,
/// class-wise means and box statistics of the final metrics.
pub fn aggregate_runs(results: &[RunResult]) -> Result<Summary> {
    let first = results.first().ok_or(Error::Empty("no runs to aggregate"))?;
    let c = first.confusion.n_classes();
    for (i, r) in results.iter().enumerate() {
        let same_shape = r.records.len() == first.records.len()
            && r.records
                .iter()
                .zip(&first.records)
                .all(|(a, b)| a.iteration == b.iteration && a.train_size == b.train_size)
            && r.confusion.n_classes() == c;
        if !same_shape {
            return Err(Error::ShapeMismatch(format!(
                "run {i} (seed {}) has {} records / {} classes, run 0 has {} / {}",
                r.seed,
                r.records.len(),
                r.confusion.n_classes(),
                first.records.len(),
                c
            )));
        }
    }

    let curve = (0..first.records.len())
        .map(|k| {
            let mut mean = [0.0; 4];
            let mut std = [0.0; 4];
            for m in 0..4 {
                let vals: Vec<f64> = results.iter().map(|r| r.records[k].headline()[m]).collect();
                (mean[m], std[m]) = mean_std(&vals);
            }
            CurvePoint { iteration: first.records[k].iteration, train_size: first.records[k].train_size, mean, std }
        })
        .collect();

    let n = results.len() as f64;
    let mean_confusion = (0..c)
        .map(|t| (0..c).map(|p| results.iter().map(|r| r.confusion.get(t, p) as f64).sum::<f64>() / n).collect())
        .collect();
    let class_mean = |f: fn(&Metrics) -> &Vec<f64>| -> Vec<f64> {
        (0..c).map(|k| results.iter().map(|r| f(&r.metrics)[k]).sum::<f64>() / n).collect()
    };

    let finals: [Vec<f64>; 4] = core::array::from_fn(|m| {
        results.iter().map(|r| r.records.last().expect("at least one record").headline()[m]).collect()
    });
    let mut final_mean = [0.0; 4];
    let mut final_std = [0.0; 4];
    for m in 0..4 {
        (final_mean[m], final_std[m]) = mean_std(&finals[m]);
    }
    let weighted = |f: fn(&Metrics) -> f64| results.iter().map(|r| f(&r.metrics)).sum::<f64>() / n;

    Ok(Summary {
        n_runs: results.len(),
        curve,
        mean_confusion,
        class_precision: class_mean(|m| &m.precision),
        class_recall: class_mean(|m| &m.recall),
        class_f1: class_mean(|m| &m.f1),
        final_mean,
        final_std,
        final_weighted_mean: [
            weighted(|m| m.weighted_precision),
            weighted(|m| m.weighted_recall),
            weighted(|m| m.weighted_f1),
        ],
        final_box: core::array::from_fn(|m| BoxStats::from_values(&finals[m])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{partition, FeatureSchema};
    use crate::forest::ForestParams;
    use crate::rng;
    use alloc::string::ToString;
    use rand::Rng as _;

    fn dataset(n: usize) -> Dataset {
        let schema = FeatureSchema::new(
            vec!["a".to_string(), "b".to_string(), "c".to_string()],
            vec!["x".to_string(), "y".to_string(), "z".to_string()],
            "label",
        )
        .unwrap();
        let mut r = rng::from_seed(99);
        let samples = (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..3).map(|_| r.random::<f64>()).collect();
                let label = if x[0] + x[1] > 1.2 {
                    0
                } else if x[2] > 0.5 {
                    1
                } else {
                    2
                };
                Sample::new(x, label)
            })
            .collect();
        Dataset::new(schema, samples).unwrap()
    }

    fn small_config(budget: usize) -> LoopConfig {
        LoopConfig {
            budget,
            synthetic_per_iteration: 64,
            classifier: ClassifierSpec::RandomForest(ForestParams { n_trees: 10, ..ForestParams::default() }),
            ..LoopConfig::default()
        }
    }

    fn split(ds: &Dataset, sizes: (usize, usize, usize), seed: u64) -> Partition {
        partition(ds, sizes, &mut substream(seed, Purpose::Split, 0)).unwrap()
    }

    #[test]
    fn one_iteration_bookkeeping() {
        let ds = dataset(120);
        let p = split(&ds, (10, 80, 30), 1);
        let cfg = small_config(5);
        let mut st = LoopState::new(&ds, &p, &cfg, 1).unwrap();
        let (acq, rec) = st.run_iteration().unwrap();
        assert_eq!(st.pool_ids().len(), 79);
        assert_eq!(st.training_ids().len(), 11);
        assert!(p.candidate.contains(&acq.id));
        assert!(!st.pool_ids().contains(&acq.id));
        assert_eq!(rec.unwrap().train_size, 11);
    }

    #[test]
    fn zero_budget_is_initial_evaluation_only() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 2);
        let r = run_sequential(&ds, &p, &small_config(0), 2).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].iteration, 0);
        assert_eq!(r.records[0].train_size, 10);
        assert!(r.acquisitions.is_empty());
    }

    #[test]
    fn record_count_with_stride() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 3);
        let cfg = LoopConfig { eval_every: 3, ..small_config(10) };
        let r = run_sequential(&ds, &p, &cfg, 3).unwrap();
        assert_eq!(r.records.len(), 10usize.div_ceil(3) + 1);
        let its: Vec<usize> = r.records.iter().map(|x| x.iteration).collect();
        assert_eq!(its, vec![0, 3, 6, 9, 10]);
        assert_eq!(r.acquisitions.len(), 10);
    }

    #[test]
    fn ids_unique_and_conserved() {
        let ds = dataset(150);
        let p = split(&ds, (10, 100, 40), 4);
        let cfg = small_config(40);
        let mut st = LoopState::new(&ds, &p, &cfg, 4).unwrap();
        let mut seen = Vec::new();
        for i in 1..=40 {
            let (acq, _) = st.run_iteration().unwrap();
            assert!(!seen.contains(&acq.id));
            seen.push(acq.id);
            assert_eq!(st.training_ids().len(), 10 + i);
            assert_eq!(st.training_ids().len() + st.pool_ids().len(), 110);
            assert_eq!(st.test_ids(), p.test.as_slice());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 5);
        let a = run_sequential(&ds, &p, &small_config(15), 5).unwrap();
        let b = run_sequential(&ds, &p, &small_config(15), 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn longer_budget_does_not_perturb_prefix() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 6);
        let a = run_sequential(&ds, &p, &small_config(8), 6).unwrap();
        let b = run_sequential(&ds, &p, &small_config(16), 6).unwrap();
        assert_eq!(a.acquisitions[..], b.acquisitions[..8]);
        assert_eq!(a.records[..], b.records[..9]);
    }

    #[test]
    fn budget_over_pool_is_config_error() {
        let ds = dataset(50);
        let p = split(&ds, (10, 20, 20), 7);
        assert!(matches!(run_sequential(&ds, &p, &small_config(21), 7), Err(Error::Config(_))));
    }

    #[test]
    fn pool_exhaustion_reports_error_from_step() {
        let ds = dataset(30);
        let p = split(&ds, (5, 2, 23), 8);
        let cfg = small_config(2);
        let mut st = LoopState::new(&ds, &p, &cfg, 8).unwrap();
        st.step().unwrap();
        st.step().unwrap();
        assert_eq!(st.step(), Err(Error::PoolExhausted));
    }

    #[test]
    fn baseline_at_initial_size_matches_zero_budget_run() {
        let ds = dataset(100);
        let p = split(&ds, (12, 58, 30), 9);
        let cfg = small_config(0);
        let seq = run_sequential(&ds, &p, &cfg, 9).unwrap();
        let base = run_baseline(&ds, &p, 12, &cfg, 9).unwrap();
        assert_eq!(seq.records, base.records);
        assert_eq!(seq.confusion, base.confusion);
        assert_eq!(seq.metrics, base.metrics);
    }

    #[test]
    fn baseline_size_checks() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 10);
        let cfg = small_config(0);
        assert!(run_baseline(&ds, &p, 71, &cfg, 1).is_err());
        assert!(run_baseline(&ds, &p, 9, &cfg, 1).is_err());
        let r = run_baseline(&ds, &p, 70, &cfg, 1).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.final_train_size, 70);
    }

    #[test]
    fn grid_search_runs_once_and_is_recorded() {
        let ds = dataset(100);
        let p = split(&ds, (25, 45, 30), 11);
        let cfg = LoopConfig {
            grid: Some(ParamGrid::RandomForest {
                n_trees: vec![5, 7],
                max_depth: vec![None, Some(2)],
                min_samples_split: vec![2],
            }),
            ..small_config(3)
        };
        let r = run_sequential(&ds, &p, &cfg, 11).unwrap();
        let cells = cfg.grid.as_ref().unwrap().cells(&cfg.classifier).unwrap();
        assert!(cells.contains(&r.classifier));
    }

    #[test]
    fn aggregate_single_and_pair() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 12);
        let r = run_sequential(&ds, &p, &small_config(4), 12).unwrap();
        let s = aggregate_runs(core::slice::from_ref(&r)).unwrap();
        assert_eq!(s.n_runs, 1);
        assert_eq!(s.curve.len(), 5);
        assert_eq!(s.final_mean, r.records.last().unwrap().headline());
        assert_eq!(s.final_std, [0.0; 4]);
        assert_eq!(s.class_f1, r.metrics.f1);

        let mut a = r.clone();
        let mut b = r.clone();
        a.records.last_mut().unwrap().accuracy = 0.8;
        b.records.last_mut().unwrap().accuracy = 0.9;
        let s = aggregate_runs(&[a, b]).unwrap();
        assert!((s.final_mean[0] - 0.85).abs() < 1e-15);
        assert_eq!(s.final_box[0].min, 0.8);
        assert_eq!(s.final_box[0].max, 0.9);
    }

    #[test]
    fn aggregate_shape_mismatch() {
        let ds = dataset(100);
        let p = split(&ds, (10, 60, 30), 13);
        let a = run_sequential(&ds, &p, &small_config(2), 13).unwrap();
        let b = run_sequential(&ds, &p, &small_config(3), 13).unwrap();
        assert!(matches!(aggregate_runs(&[a, b]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(aggregate_runs(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn box_stats_quartiles() {
        let b = BoxStats::from_values(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!(b, BoxStats { min: 1.0, q1: 2.0, median: 3.0, q3: 4.0, max: 5.0 });
        let b = BoxStats::from_values(&[1.0, 2.0]);
        assert_eq!((b.q1, b.median, b.q3), (1.25, 1.5, 1.75));
    }
}
