//! Scan configuration: bounds, bases, threshold rules, chunking, and
//! bucketing. The configuration alone determines every number in a report;
//! runtime options (thread count, checkpoint path) never do.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ScanError;

/// Where the smoothness cutoff xi = log log t is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum XiMode {
    /// Once per scan, at t = x (as in the proofs).
    #[default]
    AtBound,
    /// At each scanned modulus, for sensitivity analysis.
    PerModulus,
}

/// The epsilon(t) appearing in exponents of the form t^(8/15 + eps(t)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonRule {
    /// eps(t) = 1 / log log log(100 t), the normalized floor used in the
    /// composite-modulus argument.
    #[default]
    Default,
    /// eps(t) = 0: exponent-only thresholds, for sensitivity analysis.
    Zero,
}

impl EpsilonRule {
    pub fn eval(self, t: u64) -> f64 {
        match self {
            EpsilonRule::Default => 1.0 / (100.0 * t as f64).ln().ln().ln(),
            EpsilonRule::Zero => 0.0,
        }
    }
}

/// Density-curve bucket boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BucketRule {
    /// Powers of two from 64 up to the scan bound.
    #[default]
    Dyadic,
    /// Explicit interior boundaries, strictly increasing.
    Explicit(Vec<u64>),
}

/// Parameters of a scan. Hashing the configuration pins checkpoints to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Scan everything up to and including this bound.
    pub x: u64,
    /// The base integers of the scan (all nonzero).
    pub bases: Vec<i64>,
    /// Exponent-box size for generator-set scans.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub box_size: Option<u32>,
    pub xi_mode: XiMode,
    pub epsilon_rule: EpsilonRule,
    /// Moduli per work chunk; chunk boundaries are checkpoint boundaries.
    pub chunk_size: u64,
    pub buckets: BucketRule,
    /// Cap on listed exceptions (and witnesses); overflow sets a flag.
    pub max_exceptions: usize,
    /// Run the exact proof-invariant assertions while scanning.
    pub verify: bool,
}

impl ScanConfig {
    pub fn new(x: u64, bases: Vec<i64>) -> Self {
        Self {
            x,
            bases,
            box_size: None,
            xi_mode: XiMode::default(),
            epsilon_rule: EpsilonRule::default(),
            chunk_size: 1 << 16,
            buckets: BucketRule::default(),
            max_exceptions: 100_000,
            verify: false,
        }
    }

    pub fn with_bases(&self, bases: Vec<i64>) -> Self {
        Self {
            bases,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.x < 100 {
            return Err(ScanError::InvalidConfig(format!(
                "scan bound must be at least 100, got {}",
                self.x
            )));
        }
        if self.x > 1 << 63 {
            return Err(ScanError::InvalidConfig(
                "scan bound must be at most 2^63".into(),
            ));
        }
        if self.bases.is_empty() {
            return Err(ScanError::InvalidConfig("no bases given".into()));
        }
        if self.bases.contains(&0) {
            return Err(ScanError::InvalidConfig("bases must be nonzero".into()));
        }
        if self.chunk_size == 0 {
            return Err(ScanError::InvalidConfig("chunk size must be positive".into()));
        }
        if let Some(n) = self.box_size {
            if n < 2 {
                return Err(ScanError::InvalidConfig(
                    "box size must be at least 2".into(),
                ));
            }
        }
        if let BucketRule::Explicit(bounds) = &self.buckets {
            if !bounds.windows(2).all(|w| w[0] < w[1]) {
                return Err(ScanError::InvalidConfig(
                    "bucket boundaries must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// xi for a scanned modulus t: log log x once per scan by default.
    pub fn xi_at(&self, t: u64) -> f64 {
        match self.xi_mode {
            XiMode::AtBound => (self.x as f64).ln().ln(),
            XiMode::PerModulus => (t as f64).ln().ln(),
        }
    }

    pub fn epsilon(&self, t: u64) -> f64 {
        self.epsilon_rule.eval(t)
    }

    /// Bucket boundaries partitioning (1, x].
    pub fn bucket_boundaries(&self) -> Vec<u64> {
        match &self.buckets {
            BucketRule::Dyadic => {
                let mut v = vec![1u64];
                let mut b = 64u64;
                while b < self.x {
                    v.push(b);
                    b = b.saturating_mul(2);
                }
                v.push(self.x);
                v
            }
            BucketRule::Explicit(bounds) => {
                let mut v = vec![1u64];
                v.extend(bounds.iter().copied().filter(|&b| b > 1 && b < self.x));
                v.push(self.x);
                v
            }
        }
    }

    /// Stable digest of the configuration, pinning checkpoints to a scan.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_configs() {
        assert!(ScanConfig::new(99, vec![2]).validate().is_err());
        assert!(ScanConfig::new(1000, vec![]).validate().is_err());
        assert!(ScanConfig::new(1000, vec![2, 0]).validate().is_err());
        assert!(ScanConfig::new(1000, vec![2, 3]).validate().is_ok());
        let mut c = ScanConfig::new(1000, vec![2]);
        c.chunk_size = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn hash_tracks_semantic_fields_only() {
        let a = ScanConfig::new(10_000, vec![2, 3]);
        let mut b = a.clone();
        assert_eq!(a.content_hash(), b.content_hash());
        b.chunk_size = 1 << 10;
        assert_ne!(a.content_hash(), b.content_hash());
        let mut c = a.clone();
        c.verify = true;
        assert_ne!(a.content_hash(), c.content_hash());
    }

    #[test]
    fn dyadic_boundaries_partition_up_to_x() {
        let c = ScanConfig::new(10_000, vec![2]);
        let b = c.bucket_boundaries();
        assert_eq!(b.first(), Some(&1));
        assert_eq!(b.last(), Some(&10_000));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.contains(&64) && b.contains(&8192));

        let small = ScanConfig::new(100, vec![2]);
        assert_eq!(small.bucket_boundaries(), vec![1, 64, 100]);
    }

    #[test]
    fn epsilon_rules() {
        let c = ScanConfig::new(10_000, vec![2]);
        assert!(c.epsilon(10_000) > 0.0);
        let mut z = c.clone();
        z.epsilon_rule = EpsilonRule::Zero;
        assert_eq!(z.epsilon(10_000), 0.0);
    }

    #[test]
    fn xi_modes() {
        let c = ScanConfig::new(100_000, vec![2]);
        let xi = c.xi_at(97);
        assert!((xi - (100_000f64).ln().ln()).abs() < 1e-12);
        let mut per = c.clone();
        per.xi_mode = XiMode::PerModulus;
        assert!(per.xi_at(97) < xi);
    }
}
