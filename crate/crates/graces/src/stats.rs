//! Univariate feature scoring: one-way ANOVA F-statistics for binary labels,
//! min-max score normalization, and the convex blend used to correct
//! gradient scores with the F-test.

use crate::numerics::DenseMatrix;
use crate::{GracesError, Result};

/// Scores above this are clamped; it also stands in for an infinite
/// F-statistic (zero within-group variance with separated means).
pub const F_SENTINEL: f64 = 1e12;

// Relative squared threshold below which a sum of squares counts as zero.
const ZERO_SS: f64 = 1e-24;

/// Per-feature one-way ANOVA F-statistic for two classes.
///
/// `F = (SSB / (k-1)) / (SSW / (n-k))` with `k = 2`. A feature with no
/// within-group variance but separated group means scores [`F_SENTINEL`];
/// a feature with no variance at all scores 0.
pub fn anova_f_scores(x: &DenseMatrix, y: &[u8]) -> Result<Vec<f64>> {
    if y.len() != x.rows() {
        return Err(GracesError::invalid(format!(
            "label count {} does not match {} samples",
            y.len(),
            x.rows()
        )));
    }
    if x.rows() < 3 {
        return Err(GracesError::invalid("F-test needs at least 3 samples"));
    }
    let n1 = y.iter().filter(|&&l| l == 1).count();
    let n0 = y.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(GracesError::invalid(
            "F-test needs samples from both classes",
        ));
    }

    let n = x.rows() as f64;
    let counts = [n0 as f64, n1 as f64];
    let mut scores = Vec::with_capacity(x.cols());
    for c in 0..x.cols() {
        // One pass per group: sums and sums of squares.
        let mut sum = [0.0f64; 2];
        let mut sumsq = [0.0f64; 2];
        for r in 0..x.rows() {
            let v = x.get(r, c);
            let g = y[r] as usize;
            sum[g] += v;
            sumsq[g] += v * v;
        }
        let total = sum[0] + sum[1];
        let grand_mean = total / n;
        let mean = [sum[0] / counts[0], sum[1] / counts[1]];
        let ssb = counts[0] * (mean[0] - grand_mean).powi(2)
            + counts[1] * (mean[1] - grand_mean).powi(2);
        let ssw = (sumsq[0] - counts[0] * mean[0] * mean[0])
            + (sumsq[1] - counts[1] * mean[1] * mean[1]);

        // Scale-relative zero tests keep rounding residue from turning a
        // constant feature into a spurious score.
        let msq = (sumsq[0] + sumsq[1]) / n;
        let is_zero = |ss: f64| ss <= ZERO_SS * msq.max(f64::MIN_POSITIVE);
        let f = if is_zero(ssw) {
            if is_zero(ssb) {
                0.0
            } else {
                F_SENTINEL
            }
        } else {
            (ssb / (ssw / (n - 2.0))).min(F_SENTINEL).max(0.0)
        };
        scores.push(f);
    }
    Ok(scores)
}

/// Min-max normalization onto [0, 1]; a constant input maps to all zeros.
pub fn normalize_scores(raw: &[f64]) -> Vec<f64> {
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if raw.is_empty() || max <= min {
        return vec![0.0; raw.len()];
    }
    let span = max - min;
    raw.iter().map(|&v| (v - min) / span).collect()
}

/// Elementwise convex combination `alpha * g + (1 - alpha) * f`.
pub fn blend_scores(g: &[f64], f: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if g.len() != f.len() {
        return Err(GracesError::invalid(format!(
            "score vectors have lengths {} and {}",
            g.len(),
            f.len()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(GracesError::invalid(format!(
            "correction weight must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(g.iter()
        .zip(f)
        .map(|(&gv, &fv)| alpha * gv + (1.0 - alpha) * fv)
        .collect())
}
