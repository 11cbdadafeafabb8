//! Experiment configuration, stored as TOML.
//!
//! ```toml
//! runs = 30
//! seed = 0
//! output_dir = "out"
//! mode = "both"
//!
//! [dataset]
//! path = "meltpool.csv"
//!
//! [classifier]
//! kind = "random_forest"
//!
//! [loop]
//! budget = 250
//! ```
//!
//! Every field except `dataset.path` has a default. `grid` is `"default"`
//! (the built-in grid for the classifier family), `"none"`, or an explicit
//! table with a `kind` key.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use slrf_core::tuning::ParamGrid;
use slrf_core::{ClassifierSpec, FeatureSchema, LoopConfig};

use crate::runner::{run_seed_value, Mode, SplitSizes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    /// Relative paths resolve against the config file's directory.
    pub path: PathBuf,
    #[serde(default = "FeatureSchema::melt_pool")]
    pub schema: FeatureSchema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPreset {
    Default,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSetting {
    Preset(GridPreset),
    Explicit(ParamGrid),
}

impl Default for GridSetting {
    fn default() -> Self {
        Self::Preset(GridPreset::Default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopSettings {
    pub budget: usize,
    pub synthetic_per_iteration: usize,
    pub folds: usize,
    pub fresh_sobol_per_iteration: bool,
    pub eval_every: usize,
}

impl Default for LoopSettings {
    fn default() -> Self {
        let d = LoopConfig::default();
        Self {
            budget: d.budget,
            synthetic_per_iteration: d.synthetic_per_iteration,
            folds: d.folds,
            fresh_sobol_per_iteration: d.fresh_sobol_per_iteration,
            eval_every: d.eval_every,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Run `r` uses seed `seed + r`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Baseline training sizes; defaults to `split.initial + loop.budget`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_sizes: Option<Vec<usize>>,
    /// Also write each run's final model.
    #[serde(default)]
    pub save_models: bool,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub split: SplitSizes,
    #[serde(default)]
    pub classifier: ClassifierSpec,
    #[serde(default)]
    pub grid: GridSetting,
    #[serde(default, rename = "loop")]
    pub loop_settings: LoopSettings,
}

fn default_runs() -> usize {
    30
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_mode() -> Mode {
    Mode::Both
}

impl ExperimentConfig {
    /// Default settings around a dataset path.
    pub fn with_dataset(path: impl Into<PathBuf>) -> Self {
        Self {
            runs: default_runs(),
            seed: 0,
            output_dir: default_output_dir(),
            mode: default_mode(),
            baseline_sizes: None,
            save_models: false,
            dataset: DatasetConfig { path: path.into(), schema: FeatureSchema::melt_pool() },
            split: SplitSizes::default(),
            classifier: ClassifierSpec::default(),
            grid: GridSetting::default(),
            loop_settings: LoopSettings::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads `path`; a relative dataset path is rebased onto the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("invalid config {}", path.display()))?;
        if cfg.dataset.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.dataset.path = dir.join(&cfg.dataset.path);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Checks that need no data. Dataset-dependent checks happen in [`Self::check_dataset_size`].
    pub fn validate(&self) -> Result<()> {
        ensure!(self.runs >= 1, "runs: must be at least 1");
        self.dataset.schema.validate().context("dataset.schema")?;
        let n_features = self.dataset.schema.n_features();
        self.classifier.validate(n_features).context("classifier")?;
        if let Some(grid) = self.param_grid() {
            grid.cells(&self.classifier).context("grid")?;
        }
        self.loop_config().validate().context("loop")?;
        ensure!(
            self.loop_settings.budget <= self.split.candidate,
            "loop.budget: {} exceeds split.candidate {}",
            self.loop_settings.budget,
            self.split.candidate
        );
        if self.param_grid().is_some() {
            ensure!(
                self.split.initial >= self.loop_settings.folds,
                "loop.folds: {} folds need at least that many initial samples, split.initial is {}",
                self.loop_settings.folds,
                self.split.initial
            );
        }
        let max_train = self.split.initial + self.split.candidate;
        for &n in self.baseline_sizes().iter() {
            if n < self.split.initial || n > max_train {
                bail!("baseline_sizes: {n} outside {}..={max_train}", self.split.initial);
            }
        }
        Ok(())
    }

    pub fn check_dataset_size(&self, n: usize) -> Result<()> {
        let (a, b, c) = self.split.as_tuple();
        ensure!(a + b + c == n, "split: {a} + {b} + {c} = {} but the dataset has {n} rows", a + b + c);
        Ok(())
    }

    pub fn param_grid(&self) -> Option<ParamGrid> {
        match &self.grid {
            GridSetting::Preset(GridPreset::Default) => Some(ParamGrid::default_for(&self.classifier)),
            GridSetting::Preset(GridPreset::None) => None,
            GridSetting::Explicit(g) => Some(g.clone()),
        }
    }

    pub fn loop_config(&self) -> LoopConfig {
        let s = &self.loop_settings;
        LoopConfig {
            budget: s.budget,
            synthetic_per_iteration: s.synthetic_per_iteration,
            classifier: self.classifier.clone(),
            grid: self.param_grid(),
            folds: s.folds,
            fresh_sobol_per_iteration: s.fresh_sobol_per_iteration,
            eval_every: s.eval_every,
        }
    }

    pub fn baseline_sizes(&self) -> Vec<usize> {
        self.baseline_sizes.clone().unwrap_or_else(|| vec![self.split.initial + self.loop_settings.budget])
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.runs).map(|r| run_seed_value(self.seed, r)).collect()
    }

    /// First 12 hex digits of the SHA-256 of the canonical TOML form,
    /// ignoring `output_dir` so that moving results keeps their identity.
    pub fn hash(&self) -> Result<String> {
        let canonical = Self { output_dir: PathBuf::new(), ..self.clone() };
        let digest = Sha256::digest(canonical.to_toml()?.as_bytes());
        Ok(hex::encode(digest)[..12].to_owned())
    }
}
