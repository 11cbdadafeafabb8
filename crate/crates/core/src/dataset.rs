//! Tabular samples, the initial/candidate/test partition, and feature bounds.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Ordered feature and class names.
///
/// Class order is fixed for the lifetime of an experiment: it indexes every
/// probability vector and confusion matrix, and ties always resolve to the
/// lowest class index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureSchema {
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default = "default_label_column"))]
    pub label_column: String,
}

#[cfg(feature = "serde")]
fn default_label_column() -> String {
    "melt_pool_class".to_owned()
}

pub const MELT_POOL_FEATURES: [&str; 8] = [
    "power",
    "velocity",
    "density",
    "specific_heat",
    "thermal_conductivity",
    "melting_temperature",
    "beam_diameter",
    "absorption_coefficient",
];

pub const MELT_POOL_CLASSES: [&str; 4] = ["lack_of_fusion", "balling", "desirable", "keyhole"];

impl FeatureSchema {
    pub fn new(feature_names: Vec<String>, class_names: Vec<String>, label_column: impl Into<String>) -> Result<Self> {
        let schema = Self { feature_names, class_names, label_column: label_column.into() };
        schema.validate()?;
        Ok(schema)
    }

    /// Laser powder bed fusion melt-pool schema: 8 process/material features
    /// and 4 melt-pool regimes.
    pub fn melt_pool() -> Self {
        Self {
            feature_names: MELT_POOL_FEATURES.iter().map(|s| (*s).to_owned()).collect(),
            class_names: MELT_POOL_CLASSES.iter().map(|s| (*s).to_owned()).collect(),
            label_column: "melt_pool_class".to_owned(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.feature_names.is_empty() {
            return Err(Error::Schema("schema has no features".into()));
        }
        if self.class_names.is_empty() {
            return Err(Error::Schema("schema has no classes".into()));
        }
        if let Some(dup) = first_duplicate(&self.feature_names) {
            return Err(Error::Schema(format!("duplicate feature name {dup:?}")));
        }
        if let Some(dup) = first_duplicate(&self.class_names) {
            return Err(Error::Schema(format!("duplicate class name {dup:?}")));
        }
        if self.feature_names.contains(&self.label_column) {
            return Err(Error::Schema(format!("label column {:?} is also a feature", self.label_column)));
        }
        Ok(())
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }
}

fn first_duplicate(names: &[String]) -> Option<&str> {
    names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)).map(|(_, n)| n.as_str())
}

/// One labeled row: raw-unit features and a class index into the schema.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: usize,
}

impl Sample {
    pub fn new(features: Vec<f64>, label: usize) -> Self {
        Self { features, label }
    }
}

/// Validated samples plus their schema. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: FeatureSchema,
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(schema: FeatureSchema, samples: Vec<Sample>) -> Result<Self> {
        schema.validate()?;
        let (p, c) = (schema.n_features(), schema.n_classes());
        for (row, s) in samples.iter().enumerate() {
            if s.features.len() != p {
                return Err(Error::Schema(format!("sample {row} has {} features, schema has {p}", s.features.len())));
            }
            if let Some(j) = s.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::Schema(format!("sample {row} has non-finite {}", schema.feature_names[j])));
            }
            if s.label >= c {
                return Err(Error::Schema(format!("sample {row} has label index {} >= {c}", s.label)));
            }
        }
        Ok(Self { schema, samples })
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, id: usize) -> &Sample {
        &self.samples[id]
    }

    /// Clones the samples with the given row ids, in order.
    pub fn select(&self, ids: &[usize]) -> Vec<Sample> {
        ids.iter().map(|&i| self.samples[i].clone()).collect()
    }
}

/// Disjoint row-id sets over a source dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    pub initial: Vec<usize>,
    pub candidate: Vec<usize>,
    pub test: Vec<usize>,
}

impl Partition {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.initial.len(), self.candidate.len(), self.test.len())
    }

    /// Checks disjointness and that the three sets cover `0..n` exactly.
    pub fn check(&self, n: usize) -> Result<()> {
        let mut seen = alloc::vec![false; n];
        for &id in self.initial.iter().chain(&self.candidate).chain(&self.test) {
            if id >= n {
                return Err(Error::Config(format!("partition id {id} out of range for {n} samples")));
            }
            if core::mem::replace(&mut seen[id], true) {
                return Err(Error::Config(format!("partition id {id} appears twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Config("partition does not cover the dataset".into()));
        }
        Ok(())
    }
}

/// Uniform random split without replacement; sizes must sum to the dataset size.
pub fn partition<R: Rng + ?Sized>(dataset: &Dataset, sizes: (usize, usize, usize), rng: &mut R) -> Result<Partition> {
    let (n_initial, n_candidate, n_test) = sizes;
    let n = dataset.len();
    if n_initial + n_candidate + n_test != n {
        return Err(Error::Config(format!(
            "split sizes {n_initial}+{n_candidate}+{n_test} do not sum to dataset size {n}"
        )));
    }
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let test = ids.split_off(n_initial + n_candidate);
    let candidate = ids.split_off(n_initial);
    Ok(Partition { initial: ids, candidate, test })
}

/// Per-feature `(min, max)` in raw units.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureBounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl FeatureBounds {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::LengthMismatch { left: min.len(), right: max.len() });
        }
        if min.iter().zip(&max).any(|(lo, hi)| !lo.is_finite() || !hi.is_finite() || lo > hi) {
            return Err(Error::Domain("bounds must be finite with min <= max"));
        }
        Ok(Self { min, max })
    }

    /// Exact per-feature min and max over `samples`.
    pub fn from_samples<'a, I>(samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Sample>,
    {
        let mut it = samples.into_iter();
        let first = it.next().ok_or(Error::Empty("feature bounds need at least one sample"))?;
        let mut min = first.features.clone();
        let mut max = first.features.clone();
        for s in it {
            for (j, &v) in s.features.iter().enumerate() {
                if v < min[j] {
                    min[j] = v;
                }
                if v > max[j] {
                    max[j] = v;
                }
            }
        }
        Ok(Self { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Min-max maps `x` into the unit cube, clamping anything outside the
    /// bounds. A constant feature maps to 0.5.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter().enumerate().map(|(j, &v)| self.normalize_coord(j, v)).collect()
    }

    #[inline]
    pub fn normalize_coord(&self, j: usize, v: f64) -> f64 {
        let (lo, hi) = (self.min[j], self.max[j]);
        let span = hi - lo;
        if span <= 0.0 {
            return 0.5;
        }
        ((v - lo) / span).clamp(0.0, 1.0)
    }

    /// Inverse of [`normalize`](Self::normalize) on the unit cube.
    pub fn scale(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter().enumerate().map(|(j, &u)| self.min[j] + u * (self.max[j] - self.min[j])).collect()
    }
}
