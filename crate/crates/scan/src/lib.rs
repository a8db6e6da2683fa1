//! Bulk verification scans over primes and integers: multiplicative-order
//! thresholds, proof-side conditions, subgroup-order counting, and Skalba
//! representations, with deterministic chunked execution, checkpoint/resume,
//! and bit-stable CSV/JSON reports.

use thiserror::Error;

pub mod baseline;
pub mod checkpoint;
pub mod conditions;
pub mod config;
pub mod corollary3;
pub mod density;
pub mod emit;
pub mod ford;
pub mod matthews;
pub mod report;
pub mod runner;
pub mod skalba;
pub mod theorem1;
pub mod theorem2;
pub mod theorem4;

pub use config::{BucketRule, EpsilonRule, ScanConfig, XiMode};
pub use density::DensityCurve;
pub use runner::RunnerOpts;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Structure(#[from] orderlab_core::StructureError),
    #[error(transparent)]
    Order(#[from] orderlab_core::OrderError),
    #[error("scan aborted at a chunk boundary; progress saved to the checkpoint")]
    Aborted,
    #[error("checkpoint belongs to a different scan: found config hash {found}, expected {expected}")]
    CheckpointMismatch { expected: String, found: String },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("encoding: {0}")]
    Json(#[from] serde_json::Error),
}
