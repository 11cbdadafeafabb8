//! Melt-pool-shaped synthetic data: Gaussian blobs in physical units.
//!
//! Each class is an isotropic Gaussian in a standardized latent space, then
//! mapped feature-wise onto plausible L-PBF ranges. Class centers follow the
//! usual process map: lack of fusion at low power and high speed, keyhole at
//! high power and low speed, balling at high speed with a narrow beam.

use anyhow::{ensure, Result};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use slrf_core::rng::{substream, Purpose};
use slrf_core::{Dataset, FeatureSchema, Sample};

/// Per-feature affine map from the latent space: `mean + scale * z`.
const FEATURE_MEAN: [f64; 8] = [200.0, 1.0, 7000.0, 550.0, 15.0, 1750.0, 80e-6, 0.45];
const FEATURE_SCALE: [f64; 8] = [60.0, 0.35, 1200.0, 60.0, 4.0, 80.0, 20e-6, 0.1];

/// Latent class centers before scaling by `separation`, in schema class order.
const CENTERS: [[f64; 8]; 4] = [
    // lack_of_fusion
    [-1.0, 0.8, 0.3, 0.2, 0.3, 0.3, 0.6, -0.5],
    // balling
    [0.3, 1.4, -0.3, -0.2, 0.0, 0.2, -0.6, 0.0],
    // desirable
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    // keyhole
    [1.0, -0.9, -0.2, 0.1, -0.3, -0.2, -0.5, 0.5],
];

#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub n_samples: usize,
    /// Class proportions in schema class order; normalized on use.
    pub proportions: [f64; 4],
    /// Multiplier on the latent center offsets. Larger is easier.
    pub separation: f64,
}

impl Default for BlobSpec {
    /// 685 samples; keyhole-dominant, balling-rare.
    fn default() -> Self {
        Self { n_samples: 685, proportions: [0.22, 0.10, 0.28, 0.40], separation: 1.5 }
    }
}

/// Exact per-class counts by largest remainder; earlier classes win equal remainders.
pub fn class_counts(n: usize, proportions: &[f64]) -> Vec<usize> {
    let total: f64 = proportions.iter().sum();
    let exact: Vec<f64> = proportions.iter().map(|p| p / total * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    let short = n - counts.iter().sum::<usize>();
    for &k in order.iter().take(short) {
        counts[k] += 1;
    }
    counts
}

/// Draws a shuffled dataset under the melt-pool schema.
pub fn generate(spec: &BlobSpec, seed: u64) -> Result<Dataset> {
    ensure!(spec.proportions.iter().all(|p| p.is_finite() && *p >= 0.0), "proportions must be non-negative");
    ensure!(spec.proportions.iter().sum::<f64>() > 0.0, "proportions must not all be zero");
    let mut rng = substream(seed, Purpose::Synthetic, 0);
    let mut samples = Vec::with_capacity(spec.n_samples);
    for (class, &count) in class_counts(spec.n_samples, &spec.proportions).iter().enumerate() {
        for _ in 0..count {
            let features = (0..8)
                .map(|j| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    FEATURE_MEAN[j] + FEATURE_SCALE[j] * (spec.separation * CENTERS[class][j] + z)
                })
                .collect();
            samples.push(Sample::new(features, class));
        }
    }
    samples.shuffle(&mut rng);
    Ok(Dataset::new(FeatureSchema::melt_pool(), samples)?)
}
