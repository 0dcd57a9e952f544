//! Dense matrix and vector primitives, deterministic seeded randomness, and
//! the activation functions shared by the other modules.
//!
//! Randomness is organized as a tree of streams: a master seed is mixed with
//! small purpose tags to derive child seeds, so e.g. changing the number of
//! dropout draws never perturbs parameter initialization, and parallel work
//! can split its sub-streams up front.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{GracesError, Result};

/// Purpose tags for deriving independent random sub-streams.
pub mod stream {
    pub const INIT: u64 = 1;
    pub const DROPOUT: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const SPLIT: u64 = 4;
    pub const DATA: u64 = 5;
    pub const SVM: u64 = 6;
    pub const SELECT: u64 = 7;
    pub const GRID: u64 = 8;
    pub const BENCH: u64 = 9;
}

/// SplitMix64 finalizer; avalanches all input bits.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded random stream with deterministic, platform-independent output.
///
/// Backed by the ChaCha8 counter-based generator. [`RngState::child`]
/// derives an independent sub-stream from the *seed* (not the current
/// position), so sub-streams can be split up front and consumed in any
/// order, including in parallel.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn from_seed(seed: u64) -> Self {
        RngState {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive the independent sub-stream identified by `tag`.
    pub fn child(&self, tag: u64) -> RngState {
        RngState::from_seed(mix64(
            self.seed ^ mix64(tag.wrapping_add(0x9E37_79B9_7F4A_7C15)),
        ))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [-bound, bound).
    pub fn next_symmetric(&mut self, bound: f64) -> f64 {
        (self.next_f64() * 2.0 - 1.0) * bound
    }

    /// Unbiased uniform integer in [0, n). Widening-multiply with rejection.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// One standard Gaussian draw via the polar Box-Muller method.
    pub fn next_gaussian(&mut self) -> f64 {
        loop {
            let u = self.next_f64() * 2.0 - 1.0;
            let v = self.next_f64() * 2.0 - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }
}

/// Dense row-major matrix of `f64` values.
///
/// Instances are treated as immutable once shared; all operations over them
/// are pure functions.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from row-major entries. Errors if the length does not match
    /// `rows * cols` or any entry is non-finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(GracesError::invalid(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(GracesError::invalid("matrix entries must be finite"));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GracesError::invalid("rows have unequal lengths"));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self += scale * other`, entrywise. Panics on shape mismatch.
    pub fn add_scaled(&mut self, other: &DenseMatrix, scale: f64) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }
}

/// Elementwise `max(v, 0)`.
pub fn relu(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| x.max(0.0)).collect()
}

/// Numerically safe softmax: positive components summing to one.
///
/// The running maximum is subtracted before exponentiation so inputs with
/// magnitude up to ~700 do not overflow.
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = v.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

/// Euclidean norm of every column of `m`.
pub fn col_norms(m: &DenseMatrix) -> Vec<f64> {
    let mut sums = vec![0.0; m.cols()];
    for r in 0..m.rows() {
        for (s, &v) in sums.iter_mut().zip(m.row(r)) {
            *s += v * v;
        }
    }
    sums.iter().map(|s| s.sqrt()).collect()
}

/// `count` independent draws from a zero-mean Gaussian with the given
/// variance. Zero variance yields exact zeros.
pub fn gaussian_sample(rng: &mut RngState, count: usize, variance: f64) -> Result<Vec<f64>> {
    if !(variance >= 0.0) {
        return Err(GracesError::invalid(format!(
            "variance must be nonnegative, got {variance}"
        )));
    }
    if variance == 0.0 {
        return Ok(vec![0.0; count]);
    }
    let sd = variance.sqrt();
    Ok((0..count).map(|_| rng.next_gaussian() * sd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn relu_matches_definition() {
        assert_eq!(relu(&[-1.0, 0.0, 2.0]), vec![0.0, 0.0, 2.0]);
        assert_eq!(relu(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(relu(&[3.5, -3.5]), vec![3.5, 0.0]);
    }

    #[test]
    fn softmax_symmetry_and_shift_invariance() {
        assert_eq!(softmax(&[0.0, 0.0]), vec![0.5, 0.5]);
        for c in [-3.0, 0.0, 17.5] {
            let out = softmax(&[c, c, c]);
            for v in out {
                assert!((v - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn softmax_hand_computed_values() {
        // exp(ln 1) = 1 and exp(ln 3) = 3, so the outputs are 1/4 and 3/4.
        let out = softmax(&[1.0f64.ln(), 3.0f64.ln()]);
        assert!((out[0] - 0.25).abs() < 1e-12);
        assert!((out[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn col_norms_basics() {
        let id = DenseMatrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(col_norms(&id), vec![1.0, 1.0]);
        let zeros = DenseMatrix::zeros(3, 4);
        assert_eq!(col_norms(&zeros), vec![0.0; 4]);
        let pyth = DenseMatrix::from_vec(2, 1, vec![3.0, 4.0]).unwrap();
        assert_eq!(col_norms(&pyth), vec![5.0]);
    }

    #[test]
    fn gaussian_zero_variance_is_exact_zero() {
        let mut rng = RngState::from_seed(99);
        assert_eq!(gaussian_sample(&mut rng, 5, 0.0).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn gaussian_negative_variance_rejected() {
        let mut rng = RngState::from_seed(0);
        assert!(gaussian_sample(&mut rng, 1, -1.0).is_err());
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = RngState::from_seed(7);
        let unit = gaussian_sample(&mut rng, 100_000, 1.0).unwrap();
        let mean = unit.iter().sum::<f64>() / unit.len() as f64;
        assert!(mean.abs() < 0.02, "sample mean {mean}");

        let mut rng = RngState::from_seed(8);
        let wide = gaussian_sample(&mut rng, 100_000, 4.0).unwrap();
        let m = wide.iter().sum::<f64>() / wide.len() as f64;
        let var = wide.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (wide.len() - 1) as f64;
        assert!((var - 4.0).abs() < 0.1, "sample variance {var}");
    }

    #[test]
    fn equal_seeds_are_bit_identical() {
        let mut a = RngState::from_seed(1234);
        let mut b = RngState::from_seed(1234);
        let xs = gaussian_sample(&mut a, 64, 2.5).unwrap();
        let ys = gaussian_sample(&mut b, 64, 2.5).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn child_streams_are_independent_of_consumption() {
        let mut a = RngState::from_seed(5);
        a.next_u64();
        a.next_u64();
        let b = RngState::from_seed(5);
        // Deriving a child after consuming draws gives the same stream.
        let mut ca = a.child(stream::NOISE);
        let mut cb = b.child(stream::NOISE);
        assert_eq!(ca.next_u64(), cb.next_u64());
        // Different tags give different streams.
        let mut other = b.child(stream::INIT);
        assert_ne!(b.child(stream::NOISE).next_u64(), other.next_u64());
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = RngState::from_seed(3);
        let mut xs: Vec<usize> = (0..100).collect();
        rng.shuffle(&mut xs);
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn softmax_sums_to_one(v in proptest::collection::vec(-700.0f64..700.0, 1..8)) {
            let out = softmax(&v);
            let sum: f64 = out.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(out.iter().all(|&p| p >= 0.0));
        }

        #[test]
        fn col_norms_match_gram_diagonal(seed in 0u64..1000) {
            let mut rng = RngState::from_seed(seed);
            let data: Vec<f64> = (0..25).map(|_| rng.next_symmetric(3.0)).collect();
            let m = DenseMatrix::from_vec(5, 5, data).unwrap();
            let norms = col_norms(&m);
            for c in 0..5 {
                // sqrt of the (c, c) entry of MᵀM
                let gram_cc: f64 = (0..5).map(|r| m.get(r, c) * m.get(r, c)).sum();
                prop_assert!((norms[c] - gram_cc.sqrt()).abs() < 1e-12);
            }
        }

        #[test]
        fn next_below_is_in_range(seed in 0u64..500, n in 1u64..50) {
            let mut rng = RngState::from_seed(seed);
            for _ in 0..20 {
                prop_assert!(rng.next_below(n) < n);
            }
        }
    }
}
