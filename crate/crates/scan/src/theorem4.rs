//! Composite-modulus order scan: for every integer n in [2, x], compute the
//! eventual periods of a, b, ab, a^2 b, a b^2 mod n and flag n when the
//! largest stays at or below n^(8/15 + eps(n)). Alongside the threshold,
//! every n is checked against the exact lower bound
//! l_a(n) >= (lambda(n)/n) * prod_{p | n, p coprime to a} l_a(p),
//! and failures of the lambda(n) and omega(n) size heuristics are tallied.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use orderlab_core::{
    carmichael_lambda, check_independence, order_mod_n, order_mod_prime, residue, Factorization,
    StructureError,
};

use crate::config::ScanConfig;
use crate::density::DensityCurve;
use crate::report::{push_bounded, tool_version, FiveOrderRow};
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::theorem1::EXPONENT;
use crate::ScanError;

pub const SCAN_TAG: &str = "scan-thm4";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Theorem4Stats {
    /// Integers n in [2, x].
    pub scanned: u64,
    pub exceptions: u64,
    /// Product-lower-bound checks performed (five per n).
    pub prop_checked: u64,
    /// Exact lower-bound failures; always zero, it is a theorem.
    pub prop_failures: u64,
    /// n with lambda(n) <= n exp(-(ln ln n)^3).
    pub lambda_failures: u64,
    /// n with omega(n) > 2 ln ln x.
    pub omega_failures: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem4Report {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub stats: Theorem4Stats,
    pub exceptions: Vec<FiveOrderRow>,
    pub truncated: bool,
    pub curve: DensityCurve,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct Thm4Acc {
    stats: Theorem4Stats,
    exceptions: Vec<FiveOrderRow>,
    truncated: bool,
    curve: DensityCurve,
}

struct Thm4Processor<'a> {
    /// a, b, ab, a^2 b, a b^2 as integers.
    five: [i64; 5],
    config: &'a ScanConfig,
    boundaries: Vec<u64>,
    omega_bound: f64,
}

/// The five derived bases, or an error when a^2 b or a b^2 overflows i64.
pub fn five_bases(a: i64, b: i64) -> Result<[i64; 5], ScanError> {
    let overflow =
        || ScanError::InvalidConfig(format!("derived bases of ({a}, {b}) exceed 64 bits"));
    let ab = a.checked_mul(b).ok_or_else(overflow)?;
    let a2b = a.checked_mul(ab).ok_or_else(overflow)?;
    let ab2 = ab.checked_mul(b).ok_or_else(overflow)?;
    Ok([a, b, ab, a2b, ab2])
}

/// Exact product lower bound: n * l_a(n) >= lambda(n) * product of l_a(p)
/// over primes p | n with p coprime to a, checked in 128-bit arithmetic.
pub fn product_lower_bound_holds(
    base: i64,
    n: u64,
    fact: &Factorization,
    lambda: u64,
    order_n: u64,
    prime_facts: &mut HashMap<u64, Factorization>,
) -> bool {
    let mut prod: u128 = 1;
    for &(p, _) in fact.entries() {
        if residue(base, p) == 0 {
            continue;
        }
        let pf = prime_facts
            .entry(p)
            .or_insert_with(|| Factorization::of(p - 1));
        let lp = order_mod_prime(base, p, pf).expect("p coprime to base");
        prod *= lp as u128;
    }
    n as u128 * order_n as u128 >= lambda as u128 * prod
}

impl ChunkProcessor for Thm4Processor<'_> {
    type Acc = Thm4Acc;

    fn empty(&self) -> Thm4Acc {
        Thm4Acc {
            stats: Theorem4Stats::default(),
            exceptions: Vec::new(),
            truncated: false,
            curve: DensityCurve::new(&self.boundaries),
        }
    }

    fn absorb(&self, acc: &mut Thm4Acc, next: Thm4Acc) {
        acc.stats.scanned += next.stats.scanned;
        acc.stats.exceptions += next.stats.exceptions;
        acc.stats.prop_checked += next.stats.prop_checked;
        acc.stats.prop_failures += next.stats.prop_failures;
        acc.stats.lambda_failures += next.stats.lambda_failures;
        acc.stats.omega_failures += next.stats.omega_failures;
        let cap = self.config.max_exceptions;
        for row in next.exceptions {
            push_bounded(&mut acc.exceptions, row, cap, &mut acc.truncated);
        }
        acc.truncated |= next.truncated;
        acc.curve.absorb(&next.curve);
    }

    fn process(&self, lo: u64, hi: u64) -> Thm4Acc {
        let mut acc = self.empty();
        let mut prime_facts: HashMap<u64, Factorization> = HashMap::new();
        for n in lo..=hi {
            acc.stats.scanned += 1;
            let fact = Factorization::of(n);
            let lambda = carmichael_lambda(&fact);
            let orders = self
                .five
                .map(|base| order_mod_n(base, n, &fact).expect("bases are nonzero"));
            let max_order = *orders.iter().max().expect("five orders");

            let eps = self.config.epsilon(n);
            let ln_n = (n as f64).ln();
            let threshold_log = (EXPONENT + eps) * ln_n;
            let exception = (max_order as f64).ln() <= threshold_log;

            for (i, &base) in self.five.iter().enumerate() {
                acc.stats.prop_checked += 1;
                if !product_lower_bound_holds(base, n, &fact, lambda, orders[i], &mut prime_facts)
                {
                    acc.stats.prop_failures += 1;
                }
            }
            let lnln_n = ln_n.ln();
            if (lambda as f64) <= n as f64 * (-(lnln_n.powi(3))).exp() {
                acc.stats.lambda_failures += 1;
            }
            if fact.omega() as f64 > self.omega_bound {
                acc.stats.omega_failures += 1;
            }

            if exception {
                acc.stats.exceptions += 1;
                push_bounded(
                    &mut acc.exceptions,
                    FiveOrderRow {
                        modulus: n,
                        orders,
                        threshold: threshold_log.exp(),
                        threshold_variant: None,
                        max_order,
                    },
                    self.config.max_exceptions,
                    &mut acc.truncated,
                );
            }
            acc.curve.record(n, exception);
        }
        acc
    }
}

/// Scan all integers in [2, config.x] against the composite-modulus
/// threshold n^(8/15 + eps(n)).
pub fn scan_theorem4(
    a: i64,
    b: i64,
    config: &ScanConfig,
    opts: &RunnerOpts,
) -> Result<Theorem4Report, ScanError> {
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
    let five = five_bases(a, b)?;
    let hash = config.content_hash();
    let proc = Thm4Processor {
        five,
        config: &config,
        boundaries: config.bucket_boundaries(),
        omega_bound: 2.0 * (config.x as f64).ln().ln(),
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    Ok(Theorem4Report {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        stats: acc.stats,
        exceptions: acc.exceptions,
        truncated: acc.truncated,
        curve: acc.curve,
    })
}

/// Recompute every listed exception's five periods from scratch.
pub fn exceptions_replay(report: &Theorem4Report) -> bool {
    let [a, b] = report.config.bases[..] else {
        return false;
    };
    let Ok(five) = five_bases(a, b) else {
        return false;
    };
    report.exceptions.iter().all(|row| {
        let fact = Factorization::of(row.modulus);
        let orders = five.map(|base| order_mod_n(base, row.modulus, &fact).expect("nonzero"));
        orders == row.orders && *orders.iter().max().unwrap() == row.max_order
    })
}
