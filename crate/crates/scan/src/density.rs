//! Bucketed (range, population, exception) counts backing every "almost all"
//! observation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityBucket {
    pub lo: u64,
    pub hi: u64,
    pub population: u64,
    pub exceptions: u64,
}

/// Counts over buckets (lo, hi] partitioning (1, x]. `population` counts the
/// scanned moduli in range; skipped moduli are not scanned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub buckets: Vec<DensityBucket>,
}

impl DensityCurve {
    /// Empty curve over consecutive buckets `(boundaries[i], boundaries[i+1]]`.
    pub fn new(boundaries: &[u64]) -> Self {
        assert!(boundaries.len() >= 2 && boundaries.windows(2).all(|w| w[0] < w[1]));
        let buckets = boundaries
            .windows(2)
            .map(|w| DensityBucket {
                lo: w[0],
                hi: w[1],
                population: 0,
                exceptions: 0,
            })
            .collect();
        Self { buckets }
    }

    pub fn record(&mut self, modulus: u64, exception: bool) {
        let i = self
            .buckets
            .partition_point(|b| b.hi < modulus)
            .min(self.buckets.len() - 1);
        debug_assert!(modulus > self.buckets[i].lo && modulus <= self.buckets[i].hi);
        self.buckets[i].population += 1;
        if exception {
            self.buckets[i].exceptions += 1;
        }
    }

    /// Add another curve over the same boundaries.
    pub fn absorb(&mut self, other: &DensityCurve) {
        assert_eq!(self.buckets.len(), other.buckets.len());
        for (a, b) in self.buckets.iter_mut().zip(&other.buckets) {
            debug_assert_eq!((a.lo, a.hi), (b.lo, b.hi));
            a.population += b.population;
            a.exceptions += b.exceptions;
        }
    }

    pub fn population(&self) -> u64 {
        self.buckets.iter().map(|b| b.population).sum()
    }

    pub fn exceptions(&self) -> u64 {
        self.buckets.iter().map(|b| b.exceptions).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_land_in_half_open_buckets() {
        let mut c = DensityCurve::new(&[1, 64, 128, 200]);
        c.record(2, false);
        c.record(64, true);
        c.record(65, false);
        c.record(128, false);
        c.record(129, true);
        c.record(200, false);
        let pops: Vec<u64> = c.buckets.iter().map(|b| b.population).collect();
        assert_eq!(pops, vec![2, 2, 2]);
        let excs: Vec<u64> = c.buckets.iter().map(|b| b.exceptions).collect();
        assert_eq!(excs, vec![1, 0, 1]);
        assert_eq!(c.population(), 6);
        assert_eq!(c.exceptions(), 2);
    }

    #[test]
    fn absorb_adds_counts() {
        let mut a = DensityCurve::new(&[1, 10, 20]);
        let mut b = DensityCurve::new(&[1, 10, 20]);
        a.record(5, true);
        b.record(15, false);
        b.record(7, true);
        a.absorb(&b);
        assert_eq!(a.population(), 3);
        assert_eq!(a.exceptions(), 2);
    }
}
