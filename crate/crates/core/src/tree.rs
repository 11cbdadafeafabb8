//! CART-style binary trees.
//!
//! One builder grows both classification trees (Gini) and the regression
//! trees used by gradient boosting (variance reduction). Nodes live in a flat
//! arena with the root at index 0.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::dataset::Sample;
use crate::error::{Error, Result};

/// Minimum impurity decrease for a split to count as an improvement.
const MIN_DECREASE: f64 = 1e-12;

/// Gini impurity `1 - sum_c (n_c / n)^2` of a class-count vector.
pub fn gini(counts: &[u32]) -> Result<f64> {
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    if total == 0 {
        return Err(Error::Domain("gini of an empty node"));
    }
    Ok(gini_unchecked(counts, total as usize))
}

#[inline]
fn gini_unchecked(counts: &[u32], n: usize) -> f64 {
    let n = n as f64;
    let mut sum_sq = 0.0;
    for &c in counts {
        let p = c as f64 / n;
        sum_sq += p * p;
    }
    1.0 - sum_sq
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Node<L> {
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(L),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tree<L> {
    nodes: Vec<Node<L>>,
}

/// Classification tree; leaves hold per-class training counts.
pub type ClassTree = Tree<Vec<u32>>;

/// Regression tree; leaves hold the mean target.
pub type RegressionTree = Tree<f64>;

impl<L> Tree<L> {
    /// Wraps a prebuilt arena. Child indices must point inside `nodes`.
    pub fn from_nodes(nodes: Vec<Node<L>>) -> Self {
        Self { nodes }
    }

    pub fn nodes(&self) -> &[Node<L>] {
        &self.nodes
    }

    pub fn leaf(&self, x: &[f64]) -> &L {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf(leaf) => return leaf,
            }
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn walk<L>(nodes: &[Node<L>], i: usize) -> usize {
            match &nodes[i] {
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
                Node::Leaf(_) => 0,
            }
        }
        walk(&self.nodes, 0)
    }

    /// Structural check for arenas from untrusted sources: every child index
    /// points forward inside the arena, features are below `n_features`,
    /// thresholds are finite, and every leaf satisfies `leaf_ok`.
    pub fn check(&self, n_features: usize, leaf_ok: impl Fn(&L) -> bool) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::Domain("tree has no nodes"));
        }
        let len = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Split { feature, threshold, left, right } => {
                    let forward = |c: usize| c > i && c < len;
                    if *feature >= n_features || !threshold.is_finite() || !forward(*left) || !forward(*right) {
                        return Err(Error::Domain("malformed split node"));
                    }
                }
                Node::Leaf(l) if !leaf_ok(l) => return Err(Error::Domain("malformed leaf")),
                Node::Leaf(_) => {}
            }
        }
        Ok(())
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

impl ClassTree {
    /// Majority class of the leaf reached by `x`, lowest index on ties.
    pub fn predict(&self, x: &[f64]) -> usize {
        argmax_counts(self.leaf(x))
    }
}

impl RegressionTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        *self.leaf(x)
    }
}

pub(crate) fn argmax_counts(counts: &[u32]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

/// Resolved growth limits for a single tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowParams {
    /// Features drawn at every internal node; `>= p` disables subsampling.
    pub max_features: usize,
    /// `None` grows until another rule stops it. Depth 0 is a single leaf.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

/// Decision-tree hyperparameters (no feature subsampling).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: None, min_samples_split: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Count-weighted mean impurity of the two children.
    pub impurity: f64,
}

/// Best Gini split of `samples` over the given features.
///
/// Candidate thresholds are midpoints between consecutive distinct values.
/// Returns `None` for a pure node or when no threshold lowers the impurity.
pub fn best_split(samples: &[Sample], n_classes: usize, features: &[usize]) -> Option<Split> {
    let x: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
    let y: Vec<usize> = samples.iter().map(|s| s.label).collect();
    let crit = GiniCriterion { labels: &y, n_classes };
    let rows: Vec<usize> = (0..samples.len()).collect();
    let mut features = features.to_vec();
    features.sort_unstable();
    let total = crit.accumulate(&rows);
    let parent = crit.impurity(&total, rows.len());
    if crit.is_pure(&total, rows.len()) {
        return None;
    }
    find_split(&x, &rows, &features, &crit, &total, parent, &mut Vec::new())
}

/// Grows one classification tree on all of `samples`.
pub fn grow_tree<R: Rng + ?Sized>(
    samples: &[Sample],
    n_classes: usize,
    params: &GrowParams,
    rng: &mut R,
) -> Result<ClassTree> {
    if samples.is_empty() {
        return Err(Error::Empty("cannot grow a tree on zero samples"));
    }
    let x: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
    let y: Vec<usize> = samples.iter().map(|s| s.label).collect();
    let mut rows: Vec<usize> = (0..samples.len()).collect();
    Ok(grow_class_tree(&x, &y, n_classes, &mut rows, params, rng))
}

pub(crate) fn grow_class_tree<R: Rng + ?Sized>(
    x: &[&[f64]],
    y: &[usize],
    n_classes: usize,
    rows: &mut [usize],
    params: &GrowParams,
    rng: &mut R,
) -> ClassTree {
    let crit = GiniCriterion { labels: y, n_classes };
    Builder::new(x, &crit, params).grow(rows, rng)
}

/// Regression tree on `targets` (indexed like `x`); no feature subsampling.
pub(crate) fn grow_regression_tree(
    x: &[&[f64]],
    targets: &[f64],
    rows: &mut [usize],
    max_depth: Option<usize>,
    min_samples_split: usize,
) -> RegressionTree {
    let crit = VarianceCriterion { targets };
    let params = GrowParams { max_features: usize::MAX, max_depth, min_samples_split };
    // Full feature set: the builder never touches the rng.
    let mut rng = crate::rng::from_seed(0);
    Builder::new(x, &crit, &params).grow(rows, &mut rng)
}

trait Criterion {
    type Acc: Clone;
    type Leaf;
    fn zero(&self) -> Self::Acc;
    fn add(&self, acc: &mut Self::Acc, row: usize);
    fn sub(&self, acc: &mut Self::Acc, row: usize);
    fn impurity(&self, acc: &Self::Acc, n: usize) -> f64;
    fn is_pure(&self, acc: &Self::Acc, n: usize) -> bool;
    fn leaf(&self, acc: Self::Acc, n: usize) -> Self::Leaf;

    fn accumulate(&self, rows: &[usize]) -> Self::Acc {
        let mut acc = self.zero();
        for &r in rows {
            self.add(&mut acc, r);
        }
        acc
    }
}

struct GiniCriterion<'a> {
    labels: &'a [usize],
    n_classes: usize,
}

impl Criterion for GiniCriterion<'_> {
    type Acc = Vec<u32>;
    type Leaf = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.n_classes]
    }
    fn add(&self, acc: &mut Vec<u32>, row: usize) {
        acc[self.labels[row]] += 1;
    }
    fn sub(&self, acc: &mut Vec<u32>, row: usize) {
        acc[self.labels[row]] -= 1;
    }
    fn impurity(&self, acc: &Vec<u32>, n: usize) -> f64 {
        gini_unchecked(acc, n)
    }
    fn is_pure(&self, acc: &Vec<u32>, _n: usize) -> bool {
        acc.iter().filter(|&&c| c > 0).count() <= 1
    }
    fn leaf(&self, acc: Vec<u32>, _n: usize) -> Vec<u32> {
        acc
    }
}

struct VarianceCriterion<'a> {
    targets: &'a [f64],
}

impl Criterion for VarianceCriterion<'_> {
    /// (sum, sum of squares)
    type Acc = (f64, f64);
    type Leaf = f64;

    fn zero(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
    fn add(&self, acc: &mut (f64, f64), row: usize) {
        let t = self.targets[row];
        acc.0 += t;
        acc.1 += t * t;
    }
    fn sub(&self, acc: &mut (f64, f64), row: usize) {
        let t = self.targets[row];
        acc.0 -= t;
        acc.1 -= t * t;
    }
    fn impurity(&self, acc: &(f64, f64), n: usize) -> f64 {
        let n = n as f64;
        let mean = acc.0 / n;
        (acc.1 / n - mean * mean).max(0.0)
    }
    fn is_pure(&self, acc: &(f64, f64), n: usize) -> bool {
        self.impurity(acc, n) <= 1e-14
    }
    fn leaf(&self, acc: (f64, f64), n: usize) -> f64 {
        acc.0 / n as f64
    }
}

struct Builder<'a, C: Criterion> {
    x: &'a [&'a [f64]],
    crit: &'a C,
    params: GrowParams,
    n_features: usize,
    nodes: Vec<Node<C::Leaf>>,
    scratch: Vec<(f64, usize)>,
}

impl<'a, C: Criterion> Builder<'a, C> {
    fn new(x: &'a [&'a [f64]], crit: &'a C, params: &GrowParams) -> Self {
        let n_features = x.first().map_or(0, |r| r.len());
        Self { x, crit, params: *params, n_features, nodes: Vec::new(), scratch: Vec::new() }
    }

    fn grow<R: Rng + ?Sized>(mut self, rows: &mut [usize], rng: &mut R) -> Tree<C::Leaf> {
        self.node(rows, 0, rng);
        Tree { nodes: self.nodes }
    }

    fn draw_features<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let p = self.n_features;
        let k = self.params.max_features.max(1);
        if k >= p {
            return (0..p).collect();
        }
        let mut f = rand::seq::index::sample(rng, p, k).into_vec();
        f.sort_unstable();
        f
    }

    fn node<R: Rng + ?Sized>(&mut self, rows: &mut [usize], depth: usize, rng: &mut R) -> usize {
        let n = rows.len();
        let total = self.crit.accumulate(rows);
        let stop = self.params.max_depth.is_some_and(|d| depth >= d)
            || n < self.params.min_samples_split.max(2)
            || self.crit.is_pure(&total, n);

        let split = if stop {
            None
        } else {
            let features = self.draw_features(rng);
            let parent = self.crit.impurity(&total, n);
            find_split(self.x, rows, &features, self.crit, &total, parent, &mut self.scratch)
        };

        let id = self.nodes.len();
        let Some(split) = split else {
            self.nodes.push(Node::Leaf(self.crit.leaf(total, n)));
            return id;
        };

        self.nodes.push(Node::Split { feature: split.feature, threshold: split.threshold, left: 0, right: 0 });
        let n_left = partition_rows(rows, |r| self.x[r][split.feature] <= split.threshold);
        let (l, r) = rows.split_at_mut(n_left);
        let left = self.node(l, depth + 1, rng);
        let right = self.node(r, depth + 1, rng);
        if let Node::Split { left: ls, right: rs, .. } = &mut self.nodes[id] {
            *ls = left;
            *rs = right;
        }
        id
    }
}

/// Stable in-place partition; returns the size of the `true` prefix.
fn partition_rows(rows: &mut [usize], pred: impl Fn(usize) -> bool) -> usize {
    let (yes, no): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| pred(r));
    let k = yes.len();
    rows[..k].copy_from_slice(&yes);
    rows[k..].copy_from_slice(&no);
    k
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = (a + b) / 2.0;
    // Adjacent floats: keep `a <= t < b` so the split still separates them.
    if m >= b {
        a
    } else {
        m
    }
}

/// Scans `features` in the given (ascending) order and thresholds in
/// ascending order, replacing the incumbent only on strict improvement.
fn find_split<C: Criterion>(
    x: &[&[f64]],
    rows: &[usize],
    features: &[usize],
    crit: &C,
    total: &C::Acc,
    parent: f64,
    scratch: &mut Vec<(f64, usize)>,
) -> Option<Split> {
    let n = rows.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mut best: Option<Split> = None;
    let mut best_impurity = parent - MIN_DECREASE;

    for &f in features {
        scratch.clear();
        scratch.extend(rows.iter().map(|&r| (x[r][f], r)));
        scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
        if scratch[0].0 == scratch[n - 1].0 {
            continue;
        }
        let mut left = crit.zero();
        let mut right = total.clone();
        for i in 0..n - 1 {
            let (v, r) = scratch[i];
            crit.add(&mut left, r);
            crit.sub(&mut right, r);
            let next = scratch[i + 1].0;
            if v == next {
                continue;
            }
            let (nl, nr) = (i + 1, n - i - 1);
            let weighted = (nl as f64 / nf) * crit.impurity(&left, nl) + (nr as f64 / nf) * crit.impurity(&right, nr);
            if weighted < best_impurity {
                best_impurity = weighted;
                best = Some(Split { feature: f, threshold: midpoint(v, next), impurity: weighted });
            }
        }
    }
    best
}
