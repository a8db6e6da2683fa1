//! Row and violation types shared across scan reports.

use serde::{Deserialize, Serialize};

/// Exception row for scans over the five-element set {a, b, ab, a^2 b, a b^2}.
/// Order columns follow the CSV schema: a, b, ab, a2b, ab2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveOrderRow {
    pub modulus: u64,
    pub orders: [u64; 5],
    pub threshold: f64,
    /// Variant-threshold value (t^(8/15 + eps(t))) where a scan records one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold_variant: Option<f64>,
    pub max_order: u64,
}

/// A failed proof-invariant assertion from a `verify` run. For the
/// four-of-five check, `observed` orders were divisible by `prime` against a
/// lower bound of 4; for the box-congruence count, `observed` elements missed
/// divisibility against an upper bound of N^(k-1) - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub modulus: u64,
    pub prime: u64,
    pub observed: u64,
    pub bound: u64,
}

/// Append with a cap; overflow only sets the truncation flag.
pub(crate) fn push_bounded<T>(rows: &mut Vec<T>, row: T, cap: usize, truncated: &mut bool) {
    if rows.len() < cap {
        rows.push(row);
    } else {
        *truncated = true;
    }
}

pub(crate) fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}
