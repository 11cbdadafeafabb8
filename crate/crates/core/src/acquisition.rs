//! Least-confidence scoring of synthetic probes and nearest-candidate matching.

use alloc::vec::Vec;

use crate::classifier::{ClassProbabilities, Classifier};
use crate::dataset::{FeatureBounds, Sample};
use crate::error::{Error, Result};

/// Outcome of one acquisition step.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionResult {
    /// Most uncertain synthetic point, raw units.
    pub ideal_point: Vec<f64>,
    pub ideal_score: f64,
    /// Position in the candidate pool at selection time.
    pub chosen_candidate_index: usize,
    /// Euclidean distance in normalized space.
    pub distance: f64,
}

/// Largest class probability.
pub fn confidence(p: &ClassProbabilities) -> f64 {
    p.max()
}

/// `1 - confidence(p)`.
pub fn least_confidence(p: &ClassProbabilities) -> f64 {
    1.0 - confidence(p)
}

/// Index and score of the synthetic point with the highest least-confidence
/// score; the earliest point wins ties.
pub fn select_ideal<M, P>(model: &M, synthetic: &[P]) -> Result<(usize, f64)>
where
    M: Classifier + ?Sized,
    P: AsRef<[f64]>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in synthetic.iter().enumerate() {
        let score = least_confidence(&model.proba(x.as_ref()));
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((i, score));
        }
    }
    best.ok_or(Error::Empty("no synthetic points to score"))
}

/// Nearest candidate to `ideal` after min-max normalizing both through
/// `bounds`; the lowest pool index wins ties.
pub fn nearest_candidate<'a, I>(ideal: &[f64], candidates: I, bounds: &FeatureBounds) -> Result<(usize, f64)>
where
    I: IntoIterator<Item = &'a Sample>,
{
    let target = bounds.normalize(ideal);
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.into_iter().enumerate() {
        let d2: f64 = c
            .features
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let diff = bounds.normalize_coord(j, v) - target[j];
                diff * diff
            })
            .sum();
        if best.is_none_or(|(_, b)| d2 < b) {
            best = Some((i, d2));
        }
    }
    best.map(|(i, d2)| (i, libm::sqrt(d2))).ok_or(Error::PoolExhausted)
}

/// Scores `synthetic` (raw units), then matches the winner to the pool.
pub fn acquire<M: Classifier + ?Sized>(
    model: &M,
    synthetic: &[Vec<f64>],
    candidates: &[Sample],
    bounds: &FeatureBounds,
) -> Result<AcquisitionResult> {
    if candidates.is_empty() {
        return Err(Error::PoolExhausted);
    }
    let (ideal, score) = select_ideal(model, synthetic)?;
    let (chosen, distance) = nearest_candidate(&synthetic[ideal], candidates, bounds)?;
    Ok(AcquisitionResult {
        ideal_point: synthetic[ideal].clone(),
        ideal_score: score,
        chosen_candidate_index: chosen,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: &[f64]) -> ClassProbabilities {
        ClassProbabilities::new(v.to_vec()).unwrap()
    }

    #[test]
    fn confidence_examples() {
        assert_eq!(confidence(&p(&[0.7, 0.2, 0.1, 0.0])), 0.7);
        assert_eq!(confidence(&p(&[0.25; 4])), 0.25);
        assert_eq!(confidence(&p(&[0.0, 1.0, 0.0])), 1.0);
    }

    #[test]
    fn least_confidence_examples() {
        assert!((least_confidence(&p(&[0.7, 0.2, 0.1, 0.0])) - 0.3).abs() < 1e-15);
        assert_eq!(least_confidence(&p(&[0.25; 4])), 0.75);
        assert_eq!(least_confidence(&p(&[0.0, 1.0, 0.0])), 0.0);
    }

    /// Returns fixed probabilities keyed by the first coordinate.
    struct Table(Vec<Vec<f64>>);

    impl Classifier for Table {
        fn n_classes(&self) -> usize {
            self.0[0].len()
        }
        fn proba(&self, x: &[f64]) -> ClassProbabilities {
            p(&self.0[x[0] as usize])
        }
    }

    #[test]
    fn select_ideal_argmax_and_ties() {
        // LCS scores 0.1, 0.9, 0.4 over 10 classes.
        let mut a = vec![0.0; 10];
        a[0] = 0.9;
        a[1] = 0.1;
        let mut c = vec![0.0; 10];
        c[0] = 0.6;
        c[1] = 0.4;
        let model = Table(vec![a, vec![0.1; 10], c]);
        let pts = [[0.0], [1.0], [2.0]];
        let (i, s) = select_ideal(&model, &pts).unwrap();
        assert_eq!(i, 1);
        assert!((s - 0.9).abs() < 1e-15);
        let flat = Table(vec![vec![0.5, 0.5]; 3]);
        assert_eq!(select_ideal(&flat, &pts).unwrap().0, 0);
        let empty: [[f64; 1]; 0] = [];
        assert!(select_ideal(&flat, &empty).is_err());
    }

    #[test]
    fn nearest_candidate_plane_geometry() {
        let b = FeatureBounds::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let pool = [Sample::new(vec![0.0, 0.0], 0), Sample::new(vec![0.4, 0.6], 0), Sample::new(vec![1.0, 1.0], 0)];
        let (i, d) = nearest_candidate(&[0.5, 0.5], &pool, &b).unwrap();
        assert_eq!(i, 1);
        assert!((d - 0.02f64.sqrt()).abs() < 1e-12);
        let (i, _) = nearest_candidate(&[0.5, 0.5], &pool[2..], &b).unwrap();
        assert_eq!(i, 0);
        assert!(matches!(nearest_candidate(&[0.5, 0.5], &[], &b), Err(Error::PoolExhausted)));
    }

    #[test]
    fn nearest_candidate_tie_goes_to_lowest_index() {
        let b = FeatureBounds::new(vec![0.0], vec![2.0]).unwrap();
        let pool = [Sample::new(vec![0.0], 0), Sample::new(vec![2.0], 1)];
        assert_eq!(nearest_candidate(&[1.0], &pool, &b).unwrap().0, 0);
    }
}
