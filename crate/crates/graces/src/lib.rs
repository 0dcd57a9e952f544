//! Feature selection for high-dimensional low-sample-size (HDLSS) data.
//!
//! The centerpiece is GRACES, an iterative selector that trains a small
//! graph-convolutional network on the samples, scores every candidate feature
//! by the gradient magnitude it induces on the input weight matrix, corrects
//! the scores with an ANOVA F-test blend, and greedily grows the selected set
//! one feature at a time. The crate also ships the pieces needed to evaluate
//! a selector end to end: a synthetic benchmark generator with known ground
//! truth, delimited-text dataset ingestion, a seeded linear SVM, rank-based
//! AUROC, and a replicate benchmark runner.
//!
//! Everything is deterministic given a seed; see [`numerics::RngState`] for
//! the stream-splitting scheme that keeps independent sources of randomness
//! (initialization, dropout, noise, splits) from perturbing one another.
//!
//! The `examples/` directory has one runnable program per major capability;
//! the `graces` binary exposes the same capabilities as subcommands.

pub mod cli;
pub mod data;
pub mod eval;
pub mod graph;
pub mod network;
pub mod numerics;
pub mod selector;
pub mod stats;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum GracesError {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every candidate feature is already selected.
    #[error("all features already selected")]
    Exhausted,

    /// Malformed input file; locations are 1-based.
    #[error("parse error in {path} at row {row}, column {col}: {message}")]
    Parse {
        path: String,
        row: usize,
        col: usize,
        message: String,
    },

    /// Training produced a non-finite loss or prediction.
    #[error("training diverged at epoch {epoch}: loss is not finite")]
    TrainingDiverged { epoch: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, GracesError>;

impl GracesError {
    fn invalid(message: impl Into<String>) -> Self {
        GracesError::InvalidArgument(message.into())
    }

    /// Process exit code class for this error (1 validation, 2 I/O or
    /// parse, 3 numerical failure).
    pub fn exit_code(&self) -> i32 {
        match self {
            GracesError::InvalidArgument(_) | GracesError::Exhausted => 1,
            GracesError::Parse { .. } | GracesError::Io { .. } => 2,
            GracesError::TrainingDiverged { .. } => 3,
        }
    }
}
