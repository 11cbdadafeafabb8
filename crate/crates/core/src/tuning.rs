//! Grid search with k-fold cross-validation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::boosting::GbParams;
use crate::classifier::{Classifier, ClassifierSpec};
use crate::dataset::Sample;
use crate::error::{Error, Result};
use crate::forest::ForestParams;
use crate::rng::{self, Purpose};
use crate::tree::TreeParams;

/// Candidate values per hyperparameter. `None` depth means unlimited.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ParamGrid {
    RandomForest {
        n_trees: Vec<usize>,
        #[cfg_attr(feature = "serde", serde(with = "crate::tuning::depth_list"))]
        max_depth: Vec<Option<usize>>,
        min_samples_split: Vec<usize>,
    },
    DecisionTree {
        #[cfg_attr(feature = "serde", serde(with = "crate::tuning::depth_list"))]
        max_depth: Vec<Option<usize>>,
        min_samples_split: Vec<usize>,
    },
    GradientBoosting {
        n_rounds: Vec<usize>,
        learning_rate: Vec<f64>,
        max_depth: Vec<usize>,
    },
}

impl ParamGrid {
    /// The default search space for the family of `spec`.
    pub fn default_for(spec: &ClassifierSpec) -> Self {
        match spec {
            ClassifierSpec::RandomForest(_) => Self::RandomForest {
                n_trees: vec![100, 200, 300],
                max_depth: vec![None, Some(10), Some(20)],
                min_samples_split: vec![2, 5],
            },
            ClassifierSpec::DecisionTree(_) => Self::DecisionTree {
                max_depth: vec![None, Some(5), Some(10), Some(20)],
                min_samples_split: vec![2, 5, 10],
            },
            ClassifierSpec::GradientBoosting(_) => Self::GradientBoosting {
                n_rounds: vec![50, 100],
                learning_rate: vec![0.05, 0.1, 0.2],
                max_depth: vec![2, 3],
            },
        }
    }

    /// Cartesian product in enumeration order (first field outermost),
    /// carrying over any parameter the grid does not mention from `base`.
    pub fn cells(&self, base: &ClassifierSpec) -> Result<Vec<ClassifierSpec>> {
        let mut out = Vec::new();
        match (self, base) {
            (Self::RandomForest { n_trees, max_depth, min_samples_split }, ClassifierSpec::RandomForest(b)) => {
                for &t in n_trees {
                    for &d in max_depth {
                        for &m in min_samples_split {
                            out.push(ClassifierSpec::RandomForest(ForestParams {
                                n_trees: t,
                                max_depth: d,
                                min_samples_split: m,
                                ..*b
                            }));
                        }
                    }
                }
            }
            (Self::DecisionTree { max_depth, min_samples_split }, ClassifierSpec::DecisionTree(_)) => {
                for &d in max_depth {
                    for &m in min_samples_split {
                        out.push(ClassifierSpec::DecisionTree(TreeParams { max_depth: d, min_samples_split: m }));
                    }
                }
            }
            (Self::GradientBoosting { n_rounds, learning_rate, max_depth }, ClassifierSpec::GradientBoosting(_)) => {
                for &r in n_rounds {
                    for &lr in learning_rate {
                        for &d in max_depth {
                            out.push(ClassifierSpec::GradientBoosting(GbParams {
                                n_rounds: r,
                                learning_rate: lr,
                                max_depth: d,
                            }));
                        }
                    }
                }
            }
            _ => {
                return Err(Error::Config(format!(
                    "parameter grid does not match classifier kind {}",
                    base.kind_name()
                )))
            }
        }
        if out.is_empty() {
            return Err(Error::Config("parameter grid is empty".into()));
        }
        Ok(out)
    }
}

/// Random fold assignment: shuffles `0..n` and deals ids round-robin, so
/// fold sizes differ by at most one.
pub fn kfold<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    if k < 2 || n < k {
        return Err(Error::Config(format!("k-fold needs 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (i, id) in ids.into_iter().enumerate() {
        folds[i % k].push(id);
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub best: ClassifierSpec,
    pub best_score: f64,
    /// Every cell with its mean validation accuracy, in enumeration order.
    pub scores: Vec<(ClassifierSpec, f64)>,
}

/// Best grid cell by mean k-fold validation accuracy; earlier cells win ties.
pub fn grid_search<R: Rng + ?Sized>(
    samples: &[Sample],
    n_classes: usize,
    base: &ClassifierSpec,
    grid: &ParamGrid,
    k: usize,
    rng: &mut R,
) -> Result<ClassifierSpec> {
    grid_search_scores(samples, n_classes, base, grid, k, rng).map(|r| r.best)
}

pub fn grid_search_scores<R: Rng + ?Sized>(
    samples: &[Sample],
    n_classes: usize,
    base: &ClassifierSpec,
    grid: &ParamGrid,
    k: usize,
    rng: &mut R,
) -> Result<GridSearchResult> {
    let cells = grid.cells(base)?;
    let folds = kfold(samples.len(), k, rng)?;
    let fit_seed = rng.next_u64();

    let mut fold_of = vec![0usize; samples.len()];
    for (f, ids) in folds.iter().enumerate() {
        for &i in ids {
            fold_of[i] = f;
        }
    }

    let mut scores = Vec::with_capacity(cells.len());
    let mut best: Option<(usize, f64)> = None;
    for (ci, cell) in cells.iter().enumerate() {
        let mut total = 0.0;
        for (f, val_ids) in folds.iter().enumerate() {
            let train: Vec<Sample> =
                (0..samples.len()).filter(|&i| fold_of[i] != f).map(|i| samples[i].clone()).collect();
            let mut fit_rng = rng::substream(fit_seed, Purpose::GridSearch, (ci * k + f) as u32);
            let model = cell.fit(&train, n_classes, &mut fit_rng)?;
            let correct = val_ids.iter().filter(|&&i| model.predict(&samples[i].features) == samples[i].label).count();
            total += correct as f64 / val_ids.len() as f64;
        }
        let score = total / k as f64;
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((ci, score));
        }
        scores.push((cell.clone(), score));
    }
    let (bi, best_score) = best.expect("grid has at least one cell");
    Ok(GridSearchResult { best: cells[bi].clone(), best_score, scores })
}

/// Serde helper: depth lists where `"unlimited"` stands for no limit.
#[cfg(feature = "serde")]
pub(crate) mod depth_list {
    use alloc::vec::Vec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Depth {
        Limit(usize),
        Word(alloc::string::String),
    }

    pub fn serialize<S: Serializer>(v: &[Option<usize>], s: S) -> Result<S::Ok, S::Error> {
        let words: Vec<Depth> =
            v.iter().map(|d| d.map_or_else(|| Depth::Word("unlimited".into()), Depth::Limit)).collect();
        words.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<usize>>, D::Error> {
        Vec::<Depth>::deserialize(d)?
            .into_iter()
            .map(|x| match x {
                Depth::Limit(n) => Ok(Some(n)),
                Depth::Word(w) if w == "unlimited" => Ok(None),
                Depth::Word(w) => Err(serde::de::Error::custom(alloc::format!(
                    "max_depth entry {w:?} is neither an integer nor \"unlimited\""
                ))),
            })
            .collect()
    }
}
