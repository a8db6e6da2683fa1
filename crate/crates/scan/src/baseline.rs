//! Single-base comparison baseline: the fraction of primes p with the order
//! of a exceeding sqrt(p), bucketed like every other scan.

use serde::{Deserialize, Serialize};

use orderlab_core::{residue, Factorization, PrimeOrderContext, Sieve};

use crate::config::ScanConfig;
use crate::density::DensityCurve;
use crate::report::tool_version;
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::ScanError;

pub const SCAN_TAG: &str = "baseline";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub scanned: u64,
    pub skipped: u64,
    /// Primes with order above sqrt(p).
    pub above: u64,
    pub fraction_above: f64,
    /// Bucketed counts; `exceptions` are primes with order at most sqrt(p).
    pub curve: DensityCurve,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct BaselineAcc {
    scanned: u64,
    skipped: u64,
    above: u64,
    curve: DensityCurve,
}

struct BaselineProcessor<'a> {
    a: i64,
    sieve: Sieve,
    boundaries: Vec<u64>,
    _config: &'a ScanConfig,
}

impl ChunkProcessor for BaselineProcessor<'_> {
    type Acc = BaselineAcc;

    fn empty(&self) -> BaselineAcc {
        BaselineAcc {
            scanned: 0,
            skipped: 0,
            above: 0,
            curve: DensityCurve::new(&self.boundaries),
        }
    }

    fn absorb(&self, acc: &mut BaselineAcc, next: BaselineAcc) {
        acc.scanned += next.scanned;
        acc.skipped += next.skipped;
        acc.above += next.above;
        acc.curve.absorb(&next.curve);
    }

    fn process(&self, lo: u64, hi: u64) -> BaselineAcc {
        let mut acc = self.empty();
        for p in self.sieve.primes_in(lo, hi) {
            let r = residue(self.a, p);
            if r == 0 {
                acc.skipped += 1;
                continue;
            }
            acc.scanned += 1;
            let fact = Factorization::of(p - 1);
            let mut ctx = PrimeOrderContext::new(p, &fact).expect("factored p - 1");
            let d = ctx.order_of(r);
            let above = (d as f64).ln() > 0.5 * (p as f64).ln();
            acc.above += above as u64;
            acc.curve.record(p, !above);
        }
        acc
    }
}

/// Fraction of primes p <= config.x with the order of `a` above sqrt(p).
pub fn erdos_baseline(a: i64, config: &ScanConfig, opts: &RunnerOpts) -> Result<BaselineReport, ScanError> {
    if a == 0 || a == 1 || a == -1 {
        return Err(ScanError::InvalidConfig(format!(
            "baseline base must lie outside {{0, 1, -1}}, got {a}"
        )));
    }
    let config = config.with_bases(vec![a]);
    config.validate()?;
    let hash = config.content_hash();
    let proc = BaselineProcessor {
        a,
        sieve: Sieve::to(config.x),
        boundaries: config.bucket_boundaries(),
        _config: &config,
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    Ok(BaselineReport {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        scanned: acc.scanned,
        skipped: acc.skipped,
        above: acc.above,
        fraction_above: if acc.scanned == 0 {
            0.0
        } else {
            acc.above as f64 / acc.scanned as f64
        },
        curve: acc.curve,
    })
}
