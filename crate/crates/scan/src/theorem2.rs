//! Generator-box order scan: over primes p dividing no base, look for an
//! element of the exponent box with order above p^delta, where
//! delta = (1 - 1/(k+1))(1 - 1/N). Candidates are probed in a
//! likely-large-order-first ordering and the probe stops at the first
//! success; only exceptional primes evaluate the whole box.

use serde::{Deserialize, Serialize};

use orderlab_core::{
    build_generator_set, delta_exponents, pow_mod, residue, rough_part_squarefree, Factorization,
    GeneratorSet, PrimeOrderContext, Sieve,
};

use crate::config::ScanConfig;
use crate::density::DensityCurve;
use crate::report::{push_bounded, tool_version, Violation};
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::ScanError;

pub const SCAN_TAG: &str = "scan-thm2";

/// Exception row: orders of the k bases themselves, the p^delta threshold,
/// and the maximum order over the whole box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxOrderRow {
    pub modulus: u64,
    pub base_orders: Vec<u64>,
    pub threshold: f64,
    pub max_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Theorem2Stats {
    pub scanned: u64,
    pub skipped: u64,
    pub exceptions: u64,
    /// Candidate elements whose order was evaluated, summed over primes.
    pub probes: u64,
    pub delta: f64,
    pub delta_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub stats: Theorem2Stats,
    pub exceptions: Vec<BoxOrderRow>,
    pub truncated: bool,
    pub violations: Vec<Violation>,
    pub curve: DensityCurve,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct Thm2Acc {
    stats: Theorem2Stats,
    exceptions: Vec<BoxOrderRow>,
    truncated: bool,
    violations: Vec<Violation>,
    curve: DensityCurve,
}

struct Thm2Processor<'a> {
    config: &'a ScanConfig,
    genset: GeneratorSet,
    delta: f64,
    sieve: Sieve,
    boundaries: Vec<u64>,
    /// Element indices ordered by (exponent gcd, L1 norm, index): primitive
    /// small vectors tend to carry the largest orders.
    probe_order: Vec<u32>,
}

fn exponent_content(exps: &[u32]) -> u32 {
    exps.iter()
        .fold(0u32, |g, &e| orderlab_core::gcd(g as u64, e as u64) as u32)
}

impl<'a> Thm2Processor<'a> {
    fn new(config: &'a ScanConfig, genset: GeneratorSet, delta: f64) -> Self {
        let mut probe_order: Vec<u32> = (0..genset.len() as u32).collect();
        probe_order.sort_by_key(|&i| {
            let e = genset.element(i as usize);
            (
                exponent_content(e),
                e.iter().map(|&v| v as u64).sum::<u64>(),
                i,
            )
        });
        Self {
            config,
            delta,
            sieve: Sieve::to(config.x),
            boundaries: config.bucket_boundaries(),
            genset,
            probe_order,
        }
    }
}

impl ChunkProcessor for Thm2Processor<'_> {
    type Acc = Thm2Acc;

    fn empty(&self) -> Thm2Acc {
        Thm2Acc {
            stats: Theorem2Stats {
                delta: self.delta,
                delta_prime: self.stats_delta_prime(),
                ..Default::default()
            },
            exceptions: Vec::new(),
            truncated: false,
            violations: Vec::new(),
            curve: DensityCurve::new(&self.boundaries),
        }
    }

    fn absorb(&self, acc: &mut Thm2Acc, next: Thm2Acc) {
        acc.stats.scanned += next.stats.scanned;
        acc.stats.skipped += next.stats.skipped;
        acc.stats.exceptions += next.stats.exceptions;
        acc.stats.probes += next.stats.probes;
        let cap = self.config.max_exceptions;
        for row in next.exceptions {
            push_bounded(&mut acc.exceptions, row, cap, &mut acc.truncated);
        }
        acc.truncated |= next.truncated;
        for v in next.violations {
            push_bounded(&mut acc.violations, v, cap, &mut acc.truncated);
        }
        acc.curve.absorb(&next.curve);
    }

    fn process(&self, lo: u64, hi: u64) -> Thm2Acc {
        let mut acc = self.empty();
        let bases = self.genset.bases();
        let k = bases.len();
        let n_box = self.genset.box_size() as u64;
        for p in self.sieve.primes_in(lo, hi) {
            if bases.iter().any(|&a| residue(a, p) == 0) {
                acc.stats.skipped += 1;
                continue;
            }
            acc.stats.scanned += 1;
            let fact = Factorization::of(p - 1);
            let mut ctx = PrimeOrderContext::new(p, &fact).expect("factored p - 1");
            let threshold_log = self.delta * (p as f64).ln();

            let mut max_order = 0u64;
            let mut found = false;
            for &i in &self.probe_order {
                let r = self.genset.residue_of(i as usize, p);
                let d = ctx.order_of(r);
                acc.stats.probes += 1;
                max_order = max_order.max(d);
                if (d as f64).ln() > threshold_log {
                    found = true;
                    break;
                }
            }
            let exception = !found;

            let base_orders: Vec<u64> = bases
                .iter()
                .map(|&a| ctx.order_of_base(a).expect("p divides no base"))
                .collect();

            if self.config.verify && rough_part_squarefree(&fact, self.config.xi_at(p).floor() as u64)
            {
                // Box-congruence count: for q > max(xi, N) sharing a base
                // order, at most N^(k-1) - 1 box elements can miss q in
                // their order. Such q divide p - 1 exactly once, so
                // divisibility reduces to a q-th power test.
                let xi = self.config.xi_at(p);
                let bound = n_box.pow(k as u32 - 1) - 1;
                for &(q, _) in fact.entries() {
                    if (q as f64) <= xi || q <= n_box {
                        continue;
                    }
                    if !base_orders.iter().any(|&d| d % q == 0) {
                        continue;
                    }
                    let cofactor = (p - 1) / q;
                    let mut missing = 0u64;
                    self.genset.for_each_residue(p, |_, r| {
                        if pow_mod(r, cofactor, p) == 1 {
                            missing += 1;
                        }
                    });
                    if missing > bound {
                        push_bounded(
                            &mut acc.violations,
                            Violation {
                                modulus: p,
                                prime: q,
                                observed: missing,
                                bound,
                            },
                            self.config.max_exceptions,
                            &mut acc.truncated,
                        );
                    }
                }
            }

            if exception {
                acc.stats.exceptions += 1;
                push_bounded(
                    &mut acc.exceptions,
                    BoxOrderRow {
                        modulus: p,
                        base_orders,
                        threshold: threshold_log.exp(),
                        max_order,
                    },
                    self.config.max_exceptions,
                    &mut acc.truncated,
                );
            }
            acc.curve.record(p, exception);
        }
        acc
    }
}

impl Thm2Processor<'_> {
    fn stats_delta_prime(&self) -> f64 {
        delta_exponents(self.genset.bases().len() as u32, self.genset.box_size()).1
    }
}

/// Scan primes up to config.x for generator-box orders above p^delta.
pub fn scan_theorem2(
    bases: &[i64],
    box_size: u32,
    config: &ScanConfig,
    opts: &RunnerOpts,
) -> Result<Theorem2Report, ScanError> {
    let mut config = config.with_bases(bases.to_vec());
    config.box_size = Some(box_size);
    config.validate()?;
    let genset = build_generator_set(bases, box_size)?;
    let (delta, _) = delta_exponents(bases.len() as u32, box_size);
    let hash = config.content_hash();
    let proc = Thm2Processor::new(&config, genset, delta);
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    Ok(Theorem2Report {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        stats: acc.stats,
        exceptions: acc.exceptions,
        truncated: acc.truncated,
        violations: acc.violations,
        curve: acc.curve,
    })
}

/// Recompute each exception's base orders and box maximum from scratch.
pub fn exceptions_replay(report: &Theorem2Report) -> bool {
    let bases = &report.config.bases;
    let Some(box_size) = report.config.box_size else {
        return false;
    };
    let Ok(genset) = build_generator_set(bases, box_size) else {
        return false;
    };
    report.exceptions.iter().all(|row| {
        let p = row.modulus;
        let fact = Factorization::of(p - 1);
        let mut ctx = match PrimeOrderContext::new(p, &fact) {
            Ok(ctx) => ctx,
            Err(_) => return false,
        };
        let base_orders: Vec<u64> = match bases
            .iter()
            .map(|&a| ctx.order_of_base(a))
            .collect::<Result<_, _>>()
        {
            Ok(v) => v,
            Err(_) => return false,
        };
        let mut max_order = 0;
        genset.for_each_residue(p, |_, r| {
            max_order = max_order.max(ctx.order_of(r));
        });
        base_orders == row.base_orders && max_order == row.max_order
    })
}
