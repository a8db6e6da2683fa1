//! Shifted-prime divisor density: the proportion of primes p up to the bound
//! for which p - 1 has a divisor in (y, z], with the u^eta (ln(2/u))^(-3/2)
//! comparison curve printed alongside as a diagnostic.

use serde::{Deserialize, Serialize};

use orderlab_core::{divisor_in_interval, Factorization, Sieve};

use crate::config::ScanConfig;
use crate::report::tool_version;
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::ScanError;

pub const SCAN_TAG: &str = "density-divisor";

/// eta = 1 - (1 + ln ln 2) / ln 2, roughly 0.086.
pub fn ford_eta() -> f64 {
    let ln2 = 2f64.ln();
    1.0 - (1.0 + ln2.ln()) / ln2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorDensityReport {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub y: f64,
    pub z: f64,
    pub scanned: u64,
    /// Primes whose shifted value p - 1 has a divisor in (y, z].
    pub hits: u64,
    pub proportion: f64,
    pub eta: f64,
    /// u with z = y^(1+u).
    pub u: f64,
    /// u^eta (ln(2/u))^(-3/2); absent outside u in (0, 2).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comparison: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct FordAcc {
    scanned: u64,
    hits: u64,
}

struct FordProcessor {
    y: f64,
    z: f64,
    sieve: Sieve,
}

impl ChunkProcessor for FordProcessor {
    type Acc = FordAcc;

    fn empty(&self) -> FordAcc {
        FordAcc {
            scanned: 0,
            hits: 0,
        }
    }

    fn absorb(&self, acc: &mut FordAcc, next: FordAcc) {
        acc.scanned += next.scanned;
        acc.hits += next.hits;
    }

    fn process(&self, lo: u64, hi: u64) -> FordAcc {
        let mut acc = self.empty();
        for p in self.sieve.primes_in(lo, hi) {
            acc.scanned += 1;
            let fact = Factorization::of(p - 1);
            if divisor_in_interval(&fact, self.y, self.z) {
                acc.hits += 1;
            }
        }
        acc
    }
}

/// Proportion of primes p <= config.x whose p - 1 has a divisor in (y, z].
pub fn divisor_interval_density(
    y: f64,
    z: f64,
    config: &ScanConfig,
    opts: &RunnerOpts,
) -> Result<DivisorDensityReport, ScanError> {
    config.validate()?;
    if !(10.0 <= y && y < z && z <= config.x as f64) {
        return Err(ScanError::InvalidConfig(format!(
            "need 10 <= y < z <= x, got y = {y}, z = {z}, x = {}",
            config.x
        )));
    }
    let hash = config.content_hash();
    let proc = FordProcessor {
        y,
        z,
        sieve: Sieve::to(config.x),
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    let u = z.ln() / y.ln() - 1.0;
    let comparison = (u > 0.0 && u < 2.0).then(|| u.powf(ford_eta()) * (2.0 / u).ln().powf(-1.5));
    Ok(DivisorDensityReport {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config: config.clone(),
        y,
        z,
        scanned: acc.scanned,
        hits: acc.hits,
        proportion: if acc.scanned == 0 {
            0.0
        } else {
            acc.hits as f64 / acc.scanned as f64
        },
        eta: ford_eta(),
        u,
        comparison,
    })
}
