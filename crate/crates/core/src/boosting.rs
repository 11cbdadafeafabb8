//! Multiclass gradient boosting with a softmax link.
//!
//! Each round fits one regression tree per class present in the training
//! data to the pseudo-residuals `onehot(y) - softmax(F)`, and adds the tree's
//! output scaled by the learning rate to that class's score. Classes absent
//! from training keep probability zero.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::classifier::{ClassProbabilities, Classifier};
use crate::dataset::Sample;
use crate::error::{Error, Result};
use crate::tree::{grow_regression_tree, RegressionTree};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GbParams {
    pub n_rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
}

impl Default for GbParams {
    fn default() -> Self {
        Self { n_rounds: 100, learning_rate: 0.1, max_depth: 3 }
    }
}

impl GbParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::Config("learning_rate must be in (0, 1]".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("gradient boosting max_depth must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradientBoosting {
    n_classes: usize,
    /// Class indices seen in training; scores exist only for these.
    present: Vec<usize>,
    learning_rate: f64,
    /// `rounds[r][k]` is the tree for `present[k]` in round `r`.
    rounds: Vec<Vec<RegressionTree>>,
}

impl GradientBoosting {
    pub fn fit<R: Rng + ?Sized>(samples: &[Sample], n_classes: usize, params: &GbParams, rng: &mut R) -> Result<Self> {
        Self::fit_with_trace(samples, n_classes, params, rng).map(|(m, _)| m)
    }

    /// Also returns the mean training cross-entropy before the first round
    /// and after every round (`n_rounds + 1` values).
    pub fn fit_with_trace<R: Rng + ?Sized>(
        samples: &[Sample],
        n_classes: usize,
        params: &GbParams,
        _rng: &mut R,
    ) -> Result<(Self, Vec<f64>)> {
        if samples.is_empty() {
            return Err(Error::Empty("cannot fit gradient boosting on zero samples"));
        }
        params.validate()?;
        let mut seen = vec![false; n_classes];
        for s in samples {
            seen[s.label] = true;
        }
        let present: Vec<usize> = (0..n_classes).filter(|&c| seen[c]).collect();
        let k = present.len();
        let n = samples.len();
        let x: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
        // Position of each sample's label within `present`.
        let target: Vec<usize> = samples.iter().map(|s| present.iter().position(|&c| c == s.label).unwrap()).collect();

        let mut scores = vec![0.0; n * k];
        let mut probs = vec![0.0; n * k];
        let mut residual = vec![0.0; n];
        let mut rows: Vec<usize> = (0..n).collect();
        let mut rounds = Vec::with_capacity(params.n_rounds);
        let mut trace = Vec::with_capacity(params.n_rounds + 1);

        refresh_probs(&scores, &mut probs, k);
        trace.push(cross_entropy(&probs, &target, k));
        for _ in 0..params.n_rounds {
            let mut trees = Vec::with_capacity(k);
            for c in 0..k {
                for i in 0..n {
                    let y = if target[i] == c { 1.0 } else { 0.0 };
                    residual[i] = y - probs[i * k + c];
                }
                let tree = grow_regression_tree(&x, &residual, &mut rows, Some(params.max_depth), 2);
                for i in 0..n {
                    scores[i * k + c] += params.learning_rate * tree.predict(x[i]);
                }
                trees.push(tree);
            }
            rounds.push(trees);
            refresh_probs(&scores, &mut probs, k);
            trace.push(cross_entropy(&probs, &target, k));
        }
        Ok((Self { n_classes, present, learning_rate: params.learning_rate, rounds }, trace))
    }

    /// Structural check, for models loaded from files.
    pub fn check(&self, n_features: usize) -> Result<()> {
        let sorted = self.present.windows(2).all(|w| w[0] < w[1]);
        if self.present.is_empty() || !sorted || self.present.last().is_some_and(|&c| c >= self.n_classes) {
            return Err(Error::Domain("boosted model has an invalid class list"));
        }
        if !self.learning_rate.is_finite() {
            return Err(Error::Domain("boosted model has a non-finite learning rate"));
        }
        for round in &self.rounds {
            if round.len() != self.present.len() {
                return Err(Error::Domain("boosting round does not cover every class"));
            }
            round.iter().try_for_each(|t| t.check(n_features, |v| v.is_finite()))?;
        }
        Ok(())
    }

    pub fn present_classes(&self) -> &[usize] {
        &self.present
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Raw additive scores for the present classes, in `present` order.
    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; self.present.len()];
        for round in &self.rounds {
            for (c, tree) in round.iter().enumerate() {
                s[c] += self.learning_rate * tree.predict(x);
            }
        }
        s
    }
}

impl Classifier for GradientBoosting {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn proba(&self, x: &[f64]) -> ClassProbabilities {
        let scores = self.scores(x);
        let soft = softmax(&scores);
        let mut full = vec![0.0; self.n_classes];
        for (&c, p) in self.present.iter().zip(soft) {
            full[c] = p;
        }
        ClassProbabilities::from_vec_unchecked(full)
    }
}

/// Max-shifted softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&s| libm::exp(s - m)).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

fn refresh_probs(scores: &[f64], probs: &mut [f64], k: usize) {
    for (row, out) in scores.chunks_exact(k).zip(probs.chunks_exact_mut(k)) {
        out.copy_from_slice(&softmax(row));
    }
}

fn cross_entropy(probs: &[f64], target: &[usize], k: usize) -> f64 {
    let total: f64 = target.iter().enumerate().map(|(i, &t)| -libm::log(probs[i * k + t].max(1e-300))).sum();
    total / target.len() as f64
}
