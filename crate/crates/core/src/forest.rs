//! Random forest: bagged classification trees with per-node feature
//! subsampling and majority-vote prediction.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::classifier::ClassProbabilities;
use crate::dataset::Sample;
use crate::error::{Error, Result};
use crate::rng;
use crate::tree::{grow_class_tree, ClassTree, GrowParams};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features drawn per split; `None` means `floor(sqrt(p))`.
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, max_features: None, max_depth: None, min_samples_split: 2, bootstrap: true }
    }
}

impl ForestParams {
    pub fn resolved_max_features(&self, n_features: usize) -> usize {
        match self.max_features {
            Some(k) => k,
            None => (libm::sqrt(n_features as f64) as usize).max(1),
        }
    }

    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be positive".into()));
        }
        let k = self.resolved_max_features(n_features);
        if k == 0 || k > n_features {
            return Err(Error::Config(alloc::format!("max_features {k} outside 1..={n_features}")));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Forest {
    n_classes: usize,
    trees: Vec<ClassTree>,
}

impl Forest {
    /// Grows `n_trees` trees, each from its own rng substream seeded off `rng`.
    pub fn fit<R: Rng + ?Sized>(
        samples: &[Sample],
        n_classes: usize,
        params: &ForestParams,
        rng: &mut R,
    ) -> Result<Self> {
        Self::fit_recording_bags(samples, n_classes, params, rng).map(|(f, _)| f)
    }

    /// Like [`fit`](Self::fit), also returning the row ids each tree was trained on.
    pub fn fit_recording_bags<R: Rng + ?Sized>(
        samples: &[Sample],
        n_classes: usize,
        params: &ForestParams,
        rng: &mut R,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        if samples.is_empty() {
            return Err(Error::Empty("cannot fit a forest on zero samples"));
        }
        let p = samples[0].features.len();
        params.validate(p)?;
        let grow = GrowParams {
            max_features: params.resolved_max_features(p),
            max_depth: params.max_depth,
            min_samples_split: params.min_samples_split,
        };
        let x: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
        let y: Vec<usize> = samples.iter().map(|s| s.label).collect();
        let n = samples.len();

        let seeds: Vec<u64> = (0..params.n_trees).map(|_| rng.next_u64()).collect();
        let mut trees = Vec::with_capacity(params.n_trees);
        let mut bags = Vec::with_capacity(params.n_trees);
        for seed in seeds {
            let mut tree_rng = rng::from_seed(seed);
            let mut rows: Vec<usize> =
                if params.bootstrap { (0..n).map(|_| tree_rng.random_range(0..n)).collect() } else { (0..n).collect() };
            bags.push(rows.clone());
            trees.push(grow_class_tree(&x, &y, n_classes, &mut rows, &grow, &mut tree_rng));
        }
        Ok((Self { n_classes, trees }, bags))
    }

    pub fn from_trees(trees: Vec<ClassTree>, n_classes: usize) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::Empty("a forest needs at least one tree"));
        }
        Ok(Self { n_classes, trees })
    }

    /// Structural check, for models loaded from files.
    pub fn check(&self, n_features: usize) -> Result<()> {
        if self.n_classes == 0 || self.trees.is_empty() {
            return Err(Error::Domain("forest needs classes and at least one tree"));
        }
        self.trees.iter().try_for_each(|t| t.check(n_features, |l| l.len() == self.n_classes))
    }

    pub fn trees(&self) -> &[ClassTree] {
        &self.trees
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn votes(&self, x: &[f64]) -> Vec<u32> {
        let mut votes = vec![0u32; self.n_classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        votes
    }

    /// Mode of the per-tree predictions; ties go to the lowest class index.
    pub fn predict(&self, x: &[f64]) -> usize {
        crate::tree::argmax_counts(&self.votes(x))
    }

    /// Vote fractions over the full class set.
    pub fn proba(&self, x: &[f64]) -> ClassProbabilities {
        let n = self.trees.len() as f64;
        ClassProbabilities::from_vec_unchecked(self.votes(x).into_iter().map(|v| v as f64 / n).collect())
    }
}
