//! Sample-efficient classification under label scarcity.
//!
//! The crate combines a from-scratch random forest with least-confidence
//! acquisition over Sobol-generated synthetic points: each round the
//! classifier scores a batch of quasi-random probes, the most uncertain probe
//! is matched to its nearest real candidate, and that candidate is labeled
//! and moved into the training set.
//!
//! Everything here is pure computation over in-memory data and builds without
//! `std`; file formats, configuration and the command line live in the `slrf`
//! companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod acquisition;
pub mod boosting;
pub mod classifier;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod metrics;
pub mod rng;
pub mod seqloop;
pub mod sobol;
pub mod tree;
pub mod tuning;

mod sobol_table;

pub use acquisition::{confidence, least_confidence, nearest_candidate, select_ideal, AcquisitionResult};
pub use boosting::{GbParams, GradientBoosting};
pub use classifier::{ClassProbabilities, Classifier, ClassifierSpec, DecisionTree, Model};
pub use dataset::{partition, Dataset, FeatureBounds, FeatureSchema, Partition, Sample};
pub use error::{Error, Result};
pub use forest::{Forest, ForestParams};
pub use metrics::{confusion_matrix, evaluate, ConfusionMatrix, Metrics};
pub use seqloop::{
    aggregate_runs, run_baseline, run_baseline_with_model, run_sequential, run_sequential_with_model, Acquisition,
    BoxStats, IterationRecord, LoopConfig, LoopState, RunMode, RunResult, Summary,
};
pub use sobol::{scale_to_bounds, SobolStream};
pub use tree::{gini, TreeParams};
pub use tuning::{grid_search, ParamGrid};
