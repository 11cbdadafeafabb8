//! Seed discipline.
//!
//! A run is driven by a single master seed. Every consumer of randomness
//! (the data split, the cross-validation folds, the fit at each iteration,
//! the baseline's random picks) gets its own ChaCha stream keyed by the
//! master seed, so adding iterations never shifts the randomness seen by
//! earlier ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// What a substream is used for. The discriminant is part of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum Purpose {
    Split = 1,
    GridSearch = 2,
    Fit = 3,
    BaselineDraw = 4,
    Synthetic = 5,
}

/// Independent stream `(purpose, index)` under `master`.
pub fn substream(master: u64, purpose: Purpose, index: u32) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((purpose as u64) << 32) | index as u64);
    rng
}

/// Plain stream for callers that only have a seed.
pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
