//! Sample-similarity graph construction.
//!
//! At every selection iteration the samples are compared on the currently
//! selected feature columns only; two samples are connected when their cosine
//! similarity strictly exceeds the threshold. The graph is rebuilt from
//! scratch each iteration, so it tracks the evolving selected set.

use crate::numerics::DenseMatrix;
use crate::{GracesError, Result};

/// Undirected graph over samples, stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityGraph {
    neighbors: Vec<Vec<usize>>,
}

impl SimilarityGraph {
    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Sorted neighbor indices of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Cosine of the angle between `a` and `b`, clamped to [-1, 1].
///
/// An all-zero vector has no direction; its similarity to anything is
/// defined as 0 so the caller never divides by zero.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(GracesError::invalid(format!(
            "cosine similarity needs equal nonempty lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

/// Connect samples whose cosine similarity over the `selected` columns of
/// `x` is strictly greater than `threshold`.
pub fn build_similarity_graph(
    x: &DenseMatrix,
    selected: &[usize],
    threshold: f64,
) -> Result<SimilarityGraph> {
    if selected.is_empty() {
        return Err(GracesError::invalid(
            "similarity graph needs at least one selected column",
        ));
    }
    if let Some(&bad) = selected.iter().find(|&&c| c >= x.cols()) {
        return Err(GracesError::invalid(format!(
            "selected column {bad} out of range for {} columns",
            x.cols()
        )));
    }

    let n = x.rows();
    let restricted: Vec<Vec<f64>> = (0..n)
        .map(|r| selected.iter().map(|&c| x.get(r, c)).collect())
        .collect();
    let norms: Vec<f64> = restricted
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();

    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if norms[i] == 0.0 || norms[j] == 0.0 {
                continue;
            }
            let dot: f64 = restricted[i]
                .iter()
                .zip(&restricted[j])
                .map(|(a, b)| a * b)
                .sum();
            let score = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            if score > threshold {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    // The i<j sweep appends in increasing order already; keep the invariant
    // explicit.
    for list in &mut neighbors {
        list.sort_unstable();
    }
    Ok(SimilarityGraph { neighbors })
}
