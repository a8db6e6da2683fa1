//! Per-condition failure densities for the side conditions of the
//! five-element bound: (i) the xi-smooth part of p - 1 stays below
//! exp(sqrt(ln x)), (ii) the xi-rough part of p - 1 is squarefree,
//! (iii) both base orders exceed x^(1/2)/ln x and the joint subgroup
//! exceeds x^(2/3)/ln x.

use serde::{Deserialize, Serialize};

use orderlab_core::{
    check_independence, lcm_checked, residue, rough_part_squarefree, smooth_rough_split,
    Factorization, PrimeOrderContext, Sieve, StructureError,
};

use crate::config::ScanConfig;
use crate::density::DensityCurve;
use crate::report::tool_version;
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::ScanError;

pub const SCAN_TAG: &str = "scan-conditions";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ConditionsStats {
    pub scanned: u64,
    pub skipped: u64,
    pub fail_smooth: u64,
    pub fail_squarefree: u64,
    pub fail_orders: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub stats: ConditionsStats,
    /// Failure curve for condition (i), the smooth-part bound.
    pub smooth: DensityCurve,
    /// Failure curve for condition (ii), rough-part squarefreeness.
    pub squarefree: DensityCurve,
    /// Failure curve for condition (iii), the order bounds.
    pub orders: DensityCurve,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CondAcc {
    stats: ConditionsStats,
    smooth: DensityCurve,
    squarefree: DensityCurve,
    orders: DensityCurve,
}

struct CondProcessor<'a> {
    a: i64,
    b: i64,
    config: &'a ScanConfig,
    sieve: Sieve,
    boundaries: Vec<u64>,
    smooth_bound_log: f64,
    half_bound_log: f64,
    two_thirds_bound_log: f64,
}

impl ChunkProcessor for CondProcessor<'_> {
    type Acc = CondAcc;

    fn empty(&self) -> CondAcc {
        CondAcc {
            stats: ConditionsStats::default(),
            smooth: DensityCurve::new(&self.boundaries),
            squarefree: DensityCurve::new(&self.boundaries),
            orders: DensityCurve::new(&self.boundaries),
        }
    }

    fn absorb(&self, acc: &mut CondAcc, next: CondAcc) {
        acc.stats.scanned += next.stats.scanned;
        acc.stats.skipped += next.stats.skipped;
        acc.stats.fail_smooth += next.stats.fail_smooth;
        acc.stats.fail_squarefree += next.stats.fail_squarefree;
        acc.stats.fail_orders += next.stats.fail_orders;
        acc.smooth.absorb(&next.smooth);
        acc.squarefree.absorb(&next.squarefree);
        acc.orders.absorb(&next.orders);
    }

    fn process(&self, lo: u64, hi: u64) -> CondAcc {
        let mut acc = self.empty();
        for p in self.sieve.primes_in(lo, hi) {
            let ra = residue(self.a, p);
            let rb = residue(self.b, p);
            if ra == 0 || rb == 0 {
                acc.stats.skipped += 1;
                continue;
            }
            acc.stats.scanned += 1;
            let fact = Factorization::of(p - 1);
            let z = self.config.xi_at(p).floor() as u64;
            let split = smooth_rough_split(&fact, z);
            let fail_i = (split.smooth as f64).ln() > self.smooth_bound_log;
            let fail_ii = !rough_part_squarefree(&fact, z);
            let mut ctx = PrimeOrderContext::new(p, &fact).expect("factored p - 1");
            let la = ctx.order_of(ra);
            let lb = ctx.order_of(rb);
            let lab = lcm_checked(la, lb).expect("divides p - 1");
            let fail_iii = (la as f64).ln() <= self.half_bound_log
                || (lb as f64).ln() <= self.half_bound_log
                || (lab as f64).ln() <= self.two_thirds_bound_log;
            acc.stats.fail_smooth += fail_i as u64;
            acc.stats.fail_squarefree += fail_ii as u64;
            acc.stats.fail_orders += fail_iii as u64;
            acc.smooth.record(p, fail_i);
            acc.squarefree.record(p, fail_ii);
            acc.orders.record(p, fail_iii);
        }
        acc
    }
}

/// Count, per bucket, the primes failing each side condition separately.
pub fn scan_conditions(
    a: i64,
    b: i64,
    config: &ScanConfig,
    opts: &RunnerOpts,
) -> Result<ConditionsReport, ScanError> {
    let config = config.with_bases(vec![a, b]);
    config.validate()?;
    let verdict = check_independence(&[a, b])?;
    if let Some(relation) = verdict.relation {
        return Err(StructureError::DependentBases {
            bases: vec![a, b],
            relation,
        }
        .into());
    }
    let ln_x = (config.x as f64).ln();
    let hash = config.content_hash();
    let proc = CondProcessor {
        a,
        b,
        config: &config,
        sieve: Sieve::to(config.x),
        boundaries: config.bucket_boundaries(),
        smooth_bound_log: ln_x.sqrt(),
        half_bound_log: 0.5 * ln_x - ln_x.ln(),
        two_thirds_bound_log: (2.0 / 3.0) * ln_x - ln_x.ln(),
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    Ok(ConditionsReport {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        stats: acc.stats,
        smooth: acc.smooth,
        squarefree: acc.squarefree,
        orders: acc.orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_condition_counts_101_when_xi_below_five() {
        // xi = ln ln 150 < 2, so the rough part is all of p - 1 and
        // p = 101 fails squarefreeness (100 = 2^2 5^2).
        let config = ScanConfig::new(150, vec![2, 3]);
        let report = scan_conditions(2, 3, &config, &RunnerOpts::with_threads(1)).unwrap();
        assert!(config.xi_at(101) < 2.0);
        let fail_count_expected: u64 = orderlab_core::sieve_primes(5, 150)
            .iter()
            .filter(|&&p| {
                Factorization::of(p - 1)
                    .entries()
                    .iter()
                    .any(|&(_, e)| e > 1)
            })
            .count() as u64;
        assert_eq!(report.stats.fail_squarefree, fail_count_expected);
        assert!(report.stats.fail_squarefree > 0);
        // All three curves share the scanned population.
        assert_eq!(report.smooth.population(), report.stats.scanned);
        assert_eq!(report.squarefree.population(), report.stats.scanned);
        assert_eq!(report.orders.population(), report.stats.scanned);
    }
}
