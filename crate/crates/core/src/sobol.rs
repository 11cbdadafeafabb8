//! Unscrambled Sobol sequence in Gray-code order, 32-bit precision.
//!
//! The all-zeros point at index 0 is skipped when a stream is created, so the
//! first point a stream emits is `(0.5, ..., 0.5)`. Streams continue across
//! calls: asking for 3 points twice yields the same points as asking for 6.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::FeatureBounds;
use crate::error::{Error, Result};
use crate::sobol_table::POLYNOMIALS;

const BITS: usize = 32;
const SCALE: f64 = 1.0 / 4_294_967_296.0;

/// Largest dimension the embedded direction-number table supports.
pub const MAX_DIMENSION: usize = POLYNOMIALS.len() + 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SobolStream {
    dim: usize,
    /// `directions[d][k]` is direction integer `v_{k+1}` of dimension `d`.
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    /// Sequence index of the last emitted point.
    index: u64,
}

impl SobolStream {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIMENSION {
            return Err(Error::SobolDimension { requested: dim, capacity: MAX_DIMENSION });
        }
        let directions = (0..dim).map(direction_numbers).collect();
        Ok(Self { dim, directions, state: vec![0; dim], index: 0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sequence index of the most recently emitted point (0 before any draw).
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Next point in `[0, 1)^d`.
    pub fn next_point(&mut self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.next_into(&mut out);
        out
    }

    pub fn next_into(&mut self, out: &mut [f64]) {
        // Gray-code step: flip the direction number at the lowest set bit of the new index.
        self.index += 1;
        let bit = self.index.trailing_zeros() as usize;
        assert!(bit < BITS, "Sobol stream exhausted after 2^32 points");
        for ((s, dirs), o) in self.state.iter_mut().zip(&self.directions).zip(out.iter_mut()) {
            *s ^= dirs[bit];
            *o = *s as f64 * SCALE;
        }
    }

    /// The next `count` points.
    pub fn points(&mut self, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|_| self.next_point()).collect()
    }
}

/// Next `count` points of `stream`.
pub fn sobol_points(stream: &mut SobolStream, count: usize) -> Vec<Vec<f64>> {
    stream.points(count)
}

/// Maps a unit-cube point onto `bounds`: `min + u * (max - min)`.
pub fn scale_to_bounds(point: &[f64], bounds: &FeatureBounds) -> Vec<f64> {
    bounds.scale(point)
}

fn direction_numbers(dim: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim == 0 {
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1 << (BITS - 1 - k);
        }
        return v;
    }
    let poly = &POLYNOMIALS[dim - 1];
    let s = poly.degree as usize;
    for (k, (vk, &m)) in v.iter_mut().zip(poly.initial.iter()).take(s.min(BITS)).enumerate() {
        *vk = m << (BITS - 1 - k);
    }
    for k in s..BITS {
        let mut x = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (poly.coeffs >> (s - 1 - j)) & 1 == 1 {
                x ^= v[k - j];
            }
        }
        v[k] = x;
    }
    v
}
