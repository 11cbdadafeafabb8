//! Uniform classifier interface over the forest, a single decision tree and
//! gradient boosting, so the sequential loop never cares which one it drives.

use alloc::vec::Vec;

use rand::Rng;

use crate::boosting::{GbParams, GradientBoosting};
use crate::dataset::Sample;
use crate::error::{Error, Result};
use crate::forest::{Forest, ForestParams};
use crate::tree::{grow_class_tree, ClassTree, GrowParams, TreeParams};

/// A probability vector indexed by the full schema class set.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassProbabilities(Vec<f64>);

impl ClassProbabilities {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("probability vector"));
        }
        if probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::Domain("probabilities must be non-negative"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::Domain("probabilities must sum to 1"));
        }
        Ok(Self(probs))
    }

    pub(crate) fn from_vec_unchecked(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= Self::SUM_TOLERANCE);
        Self(probs)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }
}

pub trait Classifier {
    fn n_classes(&self) -> usize;

    fn proba(&self, x: &[f64]) -> ClassProbabilities;

    fn predict(&self, x: &[f64]) -> usize {
        self.proba(x).argmax()
    }
}

impl Classifier for Forest {
    fn n_classes(&self) -> usize {
        Forest::n_classes(self)
    }
    fn proba(&self, x: &[f64]) -> ClassProbabilities {
        Forest::proba(self, x)
    }
    fn predict(&self, x: &[f64]) -> usize {
        Forest::predict(self, x)
    }
}

/// Single unpruned tree over all features; probabilities are the leaf's
/// normalized class counts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecisionTree {
    n_classes: usize,
    tree: ClassTree,
}

impl DecisionTree {
    pub fn fit<R: Rng + ?Sized>(
        samples: &[Sample],
        n_classes: usize,
        params: &TreeParams,
        rng: &mut R,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("cannot fit a decision tree on zero samples"));
        }
        if params.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        let grow = GrowParams {
            max_features: samples[0].features.len(),
            max_depth: params.max_depth,
            min_samples_split: params.min_samples_split,
        };
        let x: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
        let y: Vec<usize> = samples.iter().map(|s| s.label).collect();
        let mut rows: Vec<usize> = (0..samples.len()).collect();
        let tree = grow_class_tree(&x, &y, n_classes, &mut rows, &grow, rng);
        Ok(Self { n_classes, tree })
    }

    /// Structural check, for models loaded from files.
    pub fn check(&self, n_features: usize) -> Result<()> {
        if self.n_classes == 0 {
            return Err(Error::Domain("decision tree needs at least one class"));
        }
        self.tree.check(n_features, |l| l.len() == self.n_classes)
    }

    pub fn tree(&self) -> &ClassTree {
        &self.tree
    }
}

impl Classifier for DecisionTree {
    fn n_classes(&self) -> usize {
        self.n_classes
    }
    fn proba(&self, x: &[f64]) -> ClassProbabilities {
        let counts = self.tree.leaf(x);
        let total: u32 = counts.iter().sum();
        let t = total as f64;
        ClassProbabilities::from_vec_unchecked(counts.iter().map(|&c| c as f64 / t).collect())
    }
}

/// Which classifier to train, with its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ClassifierSpec {
    RandomForest(ForestParams),
    DecisionTree(TreeParams),
    GradientBoosting(GbParams),
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        Self::RandomForest(ForestParams::default())
    }
}

impl ClassifierSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::RandomForest(_) => "random_forest",
            Self::DecisionTree(_) => "decision_tree",
            Self::GradientBoosting(_) => "gradient_boosting",
        }
    }

    /// Short family tag used in report rows ("RF", "DT", "GB").
    pub fn family(&self) -> &'static str {
        match self {
            Self::RandomForest(_) => "RF",
            Self::DecisionTree(_) => "DT",
            Self::GradientBoosting(_) => "GB",
        }
    }

    pub fn validate(&self, n_features: usize) -> Result<()> {
        match self {
            Self::RandomForest(p) => p.validate(n_features),
            Self::DecisionTree(p) if p.min_samples_split < 2 => {
                Err(Error::Config("min_samples_split must be at least 2".into()))
            }
            Self::DecisionTree(_) => Ok(()),
            Self::GradientBoosting(p) => p.validate(),
        }
    }

    pub fn fit<R: Rng + ?Sized>(&self, samples: &[Sample], n_classes: usize, rng: &mut R) -> Result<Model> {
        Ok(match self {
            Self::RandomForest(p) => Model::RandomForest(Forest::fit(samples, n_classes, p, rng)?),
            Self::DecisionTree(p) => Model::DecisionTree(DecisionTree::fit(samples, n_classes, p, rng)?),
            Self::GradientBoosting(p) => Model::GradientBoosting(GradientBoosting::fit(samples, n_classes, p, rng)?),
        })
    }
}

/// A trained classifier of any supported kind.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", content = "model", rename_all = "snake_case"))]
pub enum Model {
    RandomForest(Forest),
    DecisionTree(DecisionTree),
    GradientBoosting(GradientBoosting),
}

impl Model {
    /// Structural check, for models loaded from files.
    pub fn check(&self, n_features: usize) -> Result<()> {
        match self {
            Self::RandomForest(m) => m.check(n_features),
            Self::DecisionTree(m) => m.check(n_features),
            Self::GradientBoosting(m) => m.check(n_features),
        }
    }
}

impl Classifier for Model {
    fn n_classes(&self) -> usize {
        match self {
            Self::RandomForest(m) => Classifier::n_classes(m),
            Self::DecisionTree(m) => m.n_classes(),
            Self::GradientBoosting(m) => m.n_classes(),
        }
    }
    fn proba(&self, x: &[f64]) -> ClassProbabilities {
        match self {
            Self::RandomForest(m) => Classifier::proba(m, x),
            Self::DecisionTree(m) => m.proba(x),
            Self::GradientBoosting(m) => m.proba(x),
        }
    }
    fn predict(&self, x: &[f64]) -> usize {
        match self {
            Self::RandomForest(m) => Classifier::predict(m, x),
            Self::DecisionTree(m) => m.predict(x),
            Self::GradientBoosting(m) => m.predict(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use alloc::vec;

    #[test]
    fn probabilities_validation() {
        assert!(ClassProbabilities::new(vec![0.5, 0.5]).is_ok());
        assert!(ClassProbabilities::new(vec![0.5, 0.6]).is_err());
        assert!(ClassProbabilities::new(vec![-0.1, 1.1]).is_err());
        assert!(ClassProbabilities::new(vec![]).is_err());
        assert_eq!(ClassProbabilities::new(vec![0.25; 4]).unwrap().argmax(), 0);
        assert_eq!(ClassProbabilities::new(vec![0.2, 0.4, 0.4]).unwrap().argmax(), 1);
    }

    #[test]
    fn decision_tree_pure_class_is_one_hot_everywhere() {
        let data: Vec<Sample> = (0..10).map(|i| Sample::new(vec![i as f64, 1.0], 2)).collect();
        let m = DecisionTree::fit(&data, 4, &TreeParams::default(), &mut rng::from_seed(0)).unwrap();
        for x in [[-100.0, 0.0], [5.0, 5.0], [1e9, -1e9]] {
            assert_eq!(m.proba(&x).as_slice(), &[0.0, 0.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn decision_tree_deterministic_and_separable() {
        let mut r = rng::from_seed(4);
        let data: Vec<Sample> = (0..150)
            .map(|_| {
                let (a, b) = (r.random_range(-1.0..1.0f64), r.random_range(-1.0..1.0f64));
                Sample::new(vec![a, b], usize::from(a + 2.0 * b > 0.1))
            })
            .collect();
        let p = TreeParams::default();
        let a = DecisionTree::fit(&data, 2, &p, &mut rng::from_seed(1)).unwrap();
        let b = DecisionTree::fit(&data, 2, &p, &mut rng::from_seed(1)).unwrap();
        assert_eq!(a, b);
        assert!(data.iter().all(|s| a.predict(&s.features) == s.label));
        assert!(DecisionTree::fit(&[], 2, &p, &mut rng::from_seed(1)).is_err());
    }

    #[test]
    fn every_kind_predicts_argmax_of_proba() {
        let mut r = rng::from_seed(8);
        let data: Vec<Sample> = (0..120)
            .map(|_| {
                let x: Vec<f64> = (0..3).map(|_| r.random::<f64>()).collect();
                let label = if x[0] > 0.6 {
                    0
                } else if x[1] > 0.5 {
                    1
                } else {
                    2
                };
                Sample::new(x, label)
            })
            .collect();
        let specs = [
            ClassifierSpec::RandomForest(ForestParams { n_trees: 15, ..ForestParams::default() }),
            ClassifierSpec::DecisionTree(TreeParams { max_depth: Some(3), ..TreeParams::default() }),
            ClassifierSpec::GradientBoosting(GbParams { n_rounds: 10, ..GbParams::default() }),
        ];
        for spec in specs {
            let m = spec.fit(&data, 4, &mut rng::from_seed(2)).unwrap();
            for _ in 0..500 {
                let x: Vec<f64> = (0..3).map(|_| r.random_range(-0.5..1.5)).collect();
                let p = m.proba(&x);
                assert_eq!(p.len(), 4);
                assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                assert!(p.as_slice().iter().all(|&v| v >= 0.0));
                assert_eq!(m.predict(&x), p.argmax(), "{}", spec.kind_name());
            }
            assert!(m.check(3).is_ok());
            assert!(m.check(0).is_err(), "{}", spec.kind_name());
        }
    }

    #[test]
    fn check_rejects_malformed_arenas() {
        use crate::tree::{Node, Tree};
        let leaf = |c: Vec<u32>| Node::Leaf(c);
        let forest = |nodes| Forest::from_trees(vec![Tree::from_nodes(nodes)], 2).unwrap();
        let ok =
            vec![Node::Split { feature: 0, threshold: 0.5, left: 1, right: 2 }, leaf(vec![1, 0]), leaf(vec![0, 1])];
        assert!(forest(ok).check(1).is_ok());
        let backward =
            vec![Node::Split { feature: 0, threshold: 0.5, left: 0, right: 2 }, leaf(vec![1, 0]), leaf(vec![0, 1])];
        assert!(forest(backward).check(1).is_err());
        let outside = vec![Node::Split { feature: 0, threshold: 0.5, left: 1, right: 9 }, leaf(vec![1, 0])];
        assert!(forest(outside).check(1).is_err());
        let nan = vec![
            Node::Split { feature: 0, threshold: f64::NAN, left: 1, right: 2 },
            leaf(vec![1, 0]),
            leaf(vec![0, 1]),
        ];
        assert!(forest(nan).check(1).is_err());
        assert!(forest(vec![leaf(vec![1, 0, 0])]).check(1).is_err());
        assert!(forest(vec![]).check(1).is_err());
    }
}
