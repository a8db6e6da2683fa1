//! Skalba representations from the divisor lattice of A = (2*3*5*7*11)^9:
//! for every prime p coprime to 2310, try divisors a > 1 of A in decreasing
//! order of their multiplicative order mod p until some a^m + a^n + 1 is
//! divisible by p. Primes where every divisor fails are the exceptions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use orderlab_core::{
    build_generator_set, residue, Factorization, GeneratorSet, PrimeOrderContext, Sieve,
};

use crate::config::ScanConfig;
use crate::density::DensityCurve;
use crate::report::{push_bounded, tool_version};
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::skalba::search_with_table;
use crate::ScanError;

pub const SCAN_TAG: &str = "scan-corollary3";

pub const BASES: [i64; 5] = [2, 3, 5, 7, 11];
pub const BOX_SIZE: u32 = 10;

/// A verified representation: p divides a^m + a^n + 1 for the divisor `a`
/// of A given by `exponents` over the bases 2, 3, 5, 7, 11. `value` is the
/// decimal value of a (up to 2310^9, so it is carried as a string).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkalbaWitness {
    pub modulus: u64,
    pub exponents: Vec<u32>,
    pub value: String,
    pub order: u64,
    pub m: u64,
    pub n: u64,
}

/// Exception row: no divisor of A admits a representation mod p. Orders of
/// the five bases, the p^(3/4) guarantee threshold, and the best order seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cor3Row {
    pub modulus: u64,
    pub base_orders: Vec<u64>,
    pub threshold: f64,
    pub max_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Cor3Stats {
    pub scanned: u64,
    pub skipped: u64,
    pub exceptions: u64,
    pub witnesses: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary3Report {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub stats: Cor3Stats,
    pub witnesses: Vec<SkalbaWitness>,
    pub witnesses_truncated: bool,
    pub exceptions: Vec<Cor3Row>,
    pub truncated: bool,
    pub curve: DensityCurve,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct Cor3Acc {
    stats: Cor3Stats,
    witnesses: Vec<SkalbaWitness>,
    witnesses_truncated: bool,
    exceptions: Vec<Cor3Row>,
    truncated: bool,
    curve: DensityCurve,
}

struct Cor3Processor<'a> {
    config: &'a ScanConfig,
    genset: GeneratorSet,
    sieve: Sieve,
    boundaries: Vec<u64>,
}

fn element_value(genset: &GeneratorSet, idx: usize) -> u128 {
    let mut acc: u128 = 1;
    for (&a, &e) in genset.bases().iter().zip(genset.element(idx)) {
        for _ in 0..e {
            acc *= a as u128;
        }
    }
    acc
}

impl ChunkProcessor for Cor3Processor<'_> {
    type Acc = Cor3Acc;

    fn empty(&self) -> Cor3Acc {
        Cor3Acc {
            stats: Cor3Stats::default(),
            witnesses: Vec::new(),
            witnesses_truncated: false,
            exceptions: Vec::new(),
            truncated: false,
            curve: DensityCurve::new(&self.boundaries),
        }
    }

    fn absorb(&self, acc: &mut Cor3Acc, next: Cor3Acc) {
        acc.stats.scanned += next.stats.scanned;
        acc.stats.skipped += next.stats.skipped;
        acc.stats.exceptions += next.stats.exceptions;
        acc.stats.witnesses += next.stats.witnesses;
        let cap = self.config.max_exceptions;
        for w in next.witnesses {
            push_bounded(&mut acc.witnesses, w, cap, &mut acc.witnesses_truncated);
        }
        acc.witnesses_truncated |= next.witnesses_truncated;
        for row in next.exceptions {
            push_bounded(&mut acc.exceptions, row, cap, &mut acc.truncated);
        }
        acc.truncated |= next.truncated;
        acc.curve.absorb(&next.curve);
    }

    fn process(&self, lo: u64, hi: u64) -> Cor3Acc {
        let mut acc = self.empty();
        let mut table: HashMap<u64, u64> = HashMap::new();
        for p in self.sieve.primes_in(lo, hi) {
            if BASES.iter().any(|&a| residue(a, p) == 0) {
                acc.stats.skipped += 1;
                continue;
            }
            acc.stats.scanned += 1;
            let fact = Factorization::of(p - 1);
            let mut ctx = PrimeOrderContext::new(p, &fact).expect("factored p - 1");

            // Distinct candidate residues, keeping the first (lexicographically
            // least) exponent vector hitting each residue.
            let mut first_idx: HashMap<u64, u32> = HashMap::new();
            self.genset.for_each_residue(p, |i, r| {
                first_idx.entry(r).or_insert(i as u32);
            });
            let mut candidates: Vec<(u64, u32, u64)> = first_idx
                .iter()
                .map(|(&r, &i)| (ctx.order_of(r), i, r))
                .collect();
            // Largest order first; ties broken by enumeration order.
            candidates.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

            let max_order = candidates.first().map_or(0, |c| c.0);
            let mut witness = None;
            for &(order, idx, r) in &candidates {
                if let Some((m, n)) = search_with_table(r, p, order, &mut table) {
                    witness = Some((order, idx, m, n));
                    break;
                }
            }

            match witness {
                Some((order, idx, m, n)) => {
                    acc.stats.witnesses += 1;
                    push_bounded(
                        &mut acc.witnesses,
                        SkalbaWitness {
                            modulus: p,
                            exponents: self.genset.element(idx as usize).to_vec(),
                            value: element_value(&self.genset, idx as usize).to_string(),
                            order,
                            m,
                            n,
                        },
                        self.config.max_exceptions,
                        &mut acc.witnesses_truncated,
                    );
                    acc.curve.record(p, false);
                }
                None => {
                    acc.stats.exceptions += 1;
                    let base_orders: Vec<u64> = BASES
                        .iter()
                        .map(|&a| ctx.order_of_base(a).expect("p divides no base"))
                        .collect();
                    push_bounded(
                        &mut acc.exceptions,
                        Cor3Row {
                            modulus: p,
                            base_orders,
                            threshold: (p as f64).powf(0.75),
                            max_order,
                        },
                        self.config.max_exceptions,
                        &mut acc.truncated,
                    );
                    acc.curve.record(p, true);
                }
            }
        }
        acc
    }
}

/// Scan primes up to config.x (at most 2^40) for representations
/// p | a^m + a^n + 1 with a ranging over the divisors > 1 of A.
pub fn scan_corollary3(config: &ScanConfig, opts: &RunnerOpts) -> Result<Corollary3Report, ScanError> {
    let mut config = config.with_bases(BASES.to_vec());
    config.box_size = Some(BOX_SIZE);
    config.validate()?;
    if config.x > 1 << 40 {
        return Err(ScanError::InvalidConfig(
            "bound must be at most 2^40: the power table for one prime holds up to p entries"
                .into(),
        ));
    }
    let genset = build_generator_set(&BASES, BOX_SIZE).expect("2,3,5,7,11 are independent");
    let hash = config.content_hash();
    let proc = Cor3Processor {
        config: &config,
        genset,
        sieve: Sieve::to(config.x),
        boundaries: config.bucket_boundaries(),
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    Ok(Corollary3Report {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        stats: acc.stats,
        witnesses: acc.witnesses,
        witnesses_truncated: acc.witnesses_truncated,
        exceptions: acc.exceptions,
        truncated: acc.truncated,
        curve: acc.curve,
    })
}

/// Re-verify every listed witness by direct modular evaluation of
/// a^m + a^n + 1 from the exponent vector.
pub fn witnesses_verify(report: &Corollary3Report) -> bool {
    report.witnesses.iter().all(|w| {
        let p = w.modulus;
        let mut r = 1u64 % p;
        for (&a, &e) in BASES.iter().zip(&w.exponents) {
            r = orderlab_core::mul_mod(
                r,
                orderlab_core::pow_mod(residue(a, p), e as u64, p),
                p,
            );
        }
        let s = (orderlab_core::pow_mod(r, w.m, p) + orderlab_core::pow_mod(r, w.n, p)) % p;
        (s + 1) % p == 0 && w.m >= 1 && w.n >= 1
    })
}
