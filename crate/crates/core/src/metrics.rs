//! Confusion matrices and the accuracy / precision / recall / F1 family.
//!
//! Headline precision, recall and F1 are macro averages over every schema
//! class; an undefined ratio (0/0) counts as 0 and still enters the mean.
//! Support-weighted averages are kept alongside for comparison.

use alloc::vec;
use alloc::vec::Vec;

use crate::classifier::Classifier;
use crate::dataset::Sample;
use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(n_classes: usize) -> Self {
        Self { n_classes, counts: vec![0; n_classes * n_classes] }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let c = rows.len();
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Domain("confusion matrix must be square"));
        }
        Ok(Self { n_classes: c, counts: rows.concat() })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.n_classes + predicted] += 1;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.n_classes.max(1)).map(<[u64]>::to_vec).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes).map(|c| self.get(c, c)).sum()
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        (0..self.n_classes).map(|p| self.get(truth, p)).sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        (0..self.n_classes).map(|t| self.get(t, predicted)).sum()
    }
}

/// Tallies `(truth, prediction)` pairs into a `n_classes` square matrix.
pub fn confusion_matrix(predictions: &[usize], truths: &[usize], n_classes: usize) -> Result<ConfusionMatrix> {
    if predictions.len() != truths.len() {
        return Err(Error::LengthMismatch { left: predictions.len(), right: truths.len() });
    }
    let mut cm = ConfusionMatrix::zeros(n_classes);
    for (&p, &t) in predictions.iter().zip(truths) {
        if p >= n_classes || t >= n_classes {
            return Err(Error::Domain("class index outside the confusion matrix"));
        }
        cm.add(t, p);
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

impl Metrics {
    pub fn from_matrix(cm: &ConfusionMatrix) -> Result<Self> {
        let total = cm.total();
        if total == 0 {
            return Err(Error::Empty("metrics of an empty confusion matrix"));
        }
        let c = cm.n_classes();
        let precision: Vec<f64> = (0..c).map(|k| ratio(cm.get(k, k), cm.col_sum(k))).collect();
        let recall: Vec<f64> = (0..c).map(|k| ratio(cm.get(k, k), cm.row_sum(k))).collect();
        let f1: Vec<f64> = precision.iter().zip(&recall).map(|(&p, &r)| harmonic(p, r)).collect();
        let support: Vec<f64> = (0..c).map(|k| cm.row_sum(k) as f64 / total as f64).collect();
        let weighted = |v: &[f64]| v.iter().zip(&support).map(|(a, w)| a * w).sum::<f64>();
        Ok(Self {
            accuracy: ratio(cm.trace(), total),
            macro_precision: mean(&precision),
            macro_recall: mean(&recall),
            macro_f1: mean(&f1),
            weighted_precision: weighted(&precision),
            weighted_recall: weighted(&recall),
            weighted_f1: weighted(&f1),
            precision,
            recall,
            f1,
        })
    }
}

pub fn metrics_from_matrix(cm: &ConfusionMatrix) -> Result<Metrics> {
    Metrics::from_matrix(cm)
}

/// Predicts every test sample and scores the result.
pub fn evaluate<M: Classifier + ?Sized>(model: &M, test: &[Sample]) -> Result<(ConfusionMatrix, Metrics)> {
    if test.is_empty() {
        return Err(Error::Empty("cannot evaluate on an empty test set"));
    }
    let mut cm = ConfusionMatrix::zeros(model.n_classes());
    for s in test {
        cm.add(s.label, model.predict(&s.features));
    }
    let m = Metrics::from_matrix(&cm)?;
    Ok((cm, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::ClassProbabilities;

    #[test]
    fn tally_examples() {
        let cm = confusion_matrix(&[0, 1, 1], &[0, 0, 1], 2).unwrap();
        assert_eq!(cm.rows(), vec![vec![1, 1], vec![0, 1]]);
        let cm = confusion_matrix(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        assert_eq!(cm.rows(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(confusion_matrix(&[], &[], 2).unwrap(), ConfusionMatrix::zeros(2));
        assert!(matches!(confusion_matrix(&[0], &[], 2), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn diagonal_is_perfect() {
        let cm = ConfusionMatrix::from_rows(&[vec![3, 0], vec![0, 5]]).unwrap();
        let m = Metrics::from_matrix(&cm).unwrap();
        assert_eq!((m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn hand_computed_macro_values() {
        let cm = ConfusionMatrix::from_rows(&[vec![1, 1], vec![0, 2]]).unwrap();
        let m = Metrics::from_matrix(&cm).unwrap();
        // Class 0: P = 1/1, R = 1/2, F1 = 2/3. Class 1: P = 2/3, R = 2/2, F1 = 4/5.
        assert!((m.macro_precision - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert!((m.macro_recall - 0.75).abs() < 1e-15);
        assert!((m.macro_f1 - (2.0 / 3.0 + 0.8) / 2.0).abs() < 1e-15);
        assert!((m.accuracy - 0.75).abs() < 1e-15);
    }

    #[test]
    fn absent_class_scores_zero_and_counts() {
        let cm = ConfusionMatrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]).unwrap();
        let m = Metrics::from_matrix(&cm).unwrap();
        assert_eq!((m.precision[2], m.recall[2], m.f1[2]), (0.0, 0.0, 0.0));
        assert!((m.macro_f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.weighted_f1, 1.0);
    }

    #[test]
    fn empty_matrix_is_error() {
        assert!(Metrics::from_matrix(&ConfusionMatrix::zeros(3)).is_err());
    }

    struct Constant(usize);

    impl Classifier for Constant {
        fn n_classes(&self) -> usize {
            2
        }
        fn proba(&self, _: &[f64]) -> ClassProbabilities {
            let mut v = vec![0.0; 2];
            v[self.0] = 1.0;
            ClassProbabilities::new(v).unwrap()
        }
    }

    #[test]
    fn evaluate_constant_model() {
        let test: Vec<Sample> = (0..5).map(|i| Sample::new(vec![i as f64], 0)).collect();
        let (cm, m) = evaluate(&Constant(0), &test).unwrap();
        assert_eq!(cm.get(0, 0), 5);
        assert_eq!(m.accuracy, 1.0);
        assert!(evaluate(&Constant(0), &[]).is_err());
    }

    #[test]
    fn evaluate_order_invariant() {
        let mut test: Vec<Sample> = (0..9).map(|i| Sample::new(vec![i as f64], i % 2)).collect();
        let a = evaluate(&Constant(1), &test).unwrap();
        test.reverse();
        test.rotate_left(3);
        assert_eq!(a, evaluate(&Constant(1), &test).unwrap());
    }
}
