//! Subgroup-order counting: for each y in a grid, how many primes p up to
//! the bound have the subgroup generated by the bases of size at most y?
//! The counts are expected to grow like y^(1 + 1/k); the report fits the
//! log-log slope by least squares.

use serde::{Deserialize, Serialize};

use orderlab_core::{
    check_independence, lcm_checked, residue, Factorization, PrimeOrderContext, Sieve,
    StructureError,
};

use crate::config::ScanConfig;
use crate::report::tool_version;
use crate::runner::{run_chunked, ChunkProcessor, RunnerOpts};
use crate::ScanError;

pub const SCAN_TAG: &str = "scan-matthews";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatthewsPoint {
    pub y: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatthewsReport {
    pub tool_version: String,
    pub scan: String,
    pub config: ScanConfig,
    pub config_hash: String,
    pub scanned: u64,
    pub skipped: u64,
    pub points: Vec<MatthewsPoint>,
    /// Least-squares slope of ln(count) against ln(y) over nonzero counts;
    /// absent with fewer than two usable points.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slope: Option<f64>,
    /// max count / y^(3/2) over nonzero counts, for the k = 2 envelope.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub envelope_constant: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct MatthewsAcc {
    scanned: u64,
    skipped: u64,
    counts: Vec<u64>,
}

struct MatthewsProcessor<'a> {
    bases: &'a [i64],
    y_grid: &'a [f64],
    sieve: Sieve,
}

impl ChunkProcessor for MatthewsProcessor<'_> {
    type Acc = MatthewsAcc;

    fn empty(&self) -> MatthewsAcc {
        MatthewsAcc {
            scanned: 0,
            skipped: 0,
            counts: vec![0; self.y_grid.len()],
        }
    }

    fn absorb(&self, acc: &mut MatthewsAcc, next: MatthewsAcc) {
        acc.scanned += next.scanned;
        acc.skipped += next.skipped;
        for (a, b) in acc.counts.iter_mut().zip(&next.counts) {
            *a += b;
        }
    }

    fn process(&self, lo: u64, hi: u64) -> MatthewsAcc {
        let mut acc = self.empty();
        for p in self.sieve.primes_in(lo, hi) {
            if self.bases.iter().any(|&a| residue(a, p) == 0) {
                acc.skipped += 1;
                continue;
            }
            acc.scanned += 1;
            let fact = Factorization::of(p - 1);
            let mut ctx = PrimeOrderContext::new(p, &fact).expect("factored p - 1");
            let mut subgroup = 1u64;
            for &a in self.bases {
                let d = ctx.order_of_base(a).expect("p divides no base");
                subgroup = lcm_checked(subgroup, d).expect("divides p - 1");
            }
            for (i, &y) in self.y_grid.iter().enumerate() {
                if (subgroup as f64) <= y {
                    acc.counts[i] += 1;
                }
            }
        }
        acc
    }
}

/// Count primes with subgroup order at most y, for each y in the grid.
pub fn scan_matthews(
    bases: &[i64],
    y_grid: &[f64],
    config: &ScanConfig,
    opts: &RunnerOpts,
) -> Result<MatthewsReport, ScanError> {
    let config = config.with_bases(bases.to_vec());
    config.validate()?;
    if y_grid.is_empty() || y_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ScanError::InvalidConfig(
            "y grid must be nonempty and strictly increasing".into(),
        ));
    }
    let verdict = check_independence(bases)?;
    if let Some(relation) = verdict.relation {
        return Err(StructureError::DependentBases {
            bases: bases.to_vec(),
            relation,
        }
        .into());
    }
    let hash = config.content_hash();
    let proc = MatthewsProcessor {
        bases,
        y_grid,
        sieve: Sieve::to(config.x),
    };
    let acc = run_chunked(2, config.x, config.chunk_size, &hash, &proc, opts)?;
    let points: Vec<MatthewsPoint> = y_grid
        .iter()
        .zip(&acc.counts)
        .map(|(&y, &count)| MatthewsPoint { y, count })
        .collect();
    Ok(MatthewsReport {
        tool_version: tool_version(),
        scan: SCAN_TAG.into(),
        config_hash: hash,
        config,
        scanned: acc.scanned,
        skipped: acc.skipped,
        slope: fit_slope(&points),
        envelope_constant: envelope_constant(&points),
        points,
    })
}

/// Least-squares slope of ln(count) on ln(y), over points with count > 0.
pub fn fit_slope(points: &[MatthewsPoint]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.count > 0)
        .map(|p| (p.y.ln(), (p.count as f64).ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let n = data.len() as f64;
    let mean_x = data.iter().map(|d| d.0).sum::<f64>() / n;
    let mean_y = data.iter().map(|d| d.1).sum::<f64>() / n;
    let var: f64 = data.iter().map(|d| (d.0 - mean_x).powi(2)).sum();
    if var == 0.0 {
        return None;
    }
    let cov: f64 = data
        .iter()
        .map(|d| (d.0 - mean_x) * (d.1 - mean_y))
        .sum();
    Some(cov / var)
}

fn envelope_constant(points: &[MatthewsPoint]) -> Option<f64> {
    points
        .iter()
        .filter(|p| p.count > 0)
        .map(|p| p.count as f64 / p.y.powf(1.5))
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// Default grid: powers of ten from 10 up to sqrt(x).
pub fn default_y_grid(x: u64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut y = 10f64;
    while y * y <= x as f64 {
        grid.push(y);
        y *= 10.0;
    }
    if grid.is_empty() {
        grid.push(10.0);
    }
    grid
}
