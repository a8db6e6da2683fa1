//! Integer-structure utilities: smooth/rough decomposition, divisor-interval
//! queries, multiplicative independence over the rationals, and generator
//! sets built from exponent boxes.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{factorize, mul_mod, pow_mod, Factorization};
use crate::order::residue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("base must be nonzero")]
    ZeroBase,
    #[error("base list is empty")]
    EmptyBases,
    #[error("bases are multiplicatively dependent: {}", relation_display(.bases, .relation))]
    DependentBases { bases: Vec<i64>, relation: Vec<i64> },
    #[error("box size must be at least 2")]
    BoxTooSmall,
    #[error("generator set would have {0} elements; refusing to build more than {MAX_ELEMENTS}")]
    BoxTooLarge(u128),
    #[error("dependence relation does not fit in 64-bit integers")]
    RelationOverflow,
}

/// Render a relation as `2^2 * 4^-1 = 1`, omitting zero exponents.
pub fn relation_display(bases: &[i64], relation: &[i64]) -> String {
    let terms: Vec<String> = bases
        .iter()
        .zip(relation)
        .filter(|(_, &e)| e != 0)
        .map(|(a, e)| format!("{a}^{e}"))
        .collect();
    format!("{} = 1", terms.join(" * "))
}

/// The z-smooth part of a factored number and its cofactor, the z-rough part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothRoughSplit {
    pub smooth: u64,
    pub rough: u64,
    pub threshold: u64,
}

/// Partition the prime powers of `fact` by prime <= z versus prime > z.
/// The smooth and rough parts multiply back to the factored number.
pub fn smooth_rough_split(fact: &Factorization, z: u64) -> SmoothRoughSplit {
    let mut smooth = 1u64;
    let mut rough = 1u64;
    for &(p, e) in fact.entries() {
        if p <= z {
            smooth *= p.pow(e);
        } else {
            rough *= p.pow(e);
        }
    }
    SmoothRoughSplit {
        smooth,
        rough,
        threshold: z,
    }
}

/// True iff every prime factor exceeding z appears to the first power.
pub fn rough_part_squarefree(fact: &Factorization, z: u64) -> bool {
    fact.entries().iter().all(|&(p, e)| p <= z || e == 1)
}

/// Does the factored number have a divisor d with y < d <= z?
///
/// Depth-first over prime-power choices; a branch is abandoned as soon as the
/// partial product exceeds z, since the remaining factors only grow it.
pub fn divisor_in_interval(fact: &Factorization, y: f64, z: f64) -> bool {
    fn dfs(entries: &[(u64, u32)], idx: usize, partial: u64, y: f64, z: f64) -> bool {
        let d = partial as f64;
        if d > z {
            return false;
        }
        if d > y {
            return true;
        }
        if idx == entries.len() {
            return false;
        }
        let (p, e) = entries[idx];
        let mut value = partial;
        for step in 0..=e {
            if step > 0 {
                match value.checked_mul(p) {
                    Some(v) => value = v,
                    None => return false,
                }
            }
            if dfs(entries, idx + 1, value, y, z) {
                return true;
            }
            if (value as f64) > z {
                return false;
            }
        }
        false
    }
    dfs(fact.entries(), 0, 1, y, z)
}

/// Outcome of a multiplicative-independence check. When dependent, `relation`
/// holds a nonzero integer vector e with product(bases[i]^e[i]) = 1 exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub relation: Option<Vec<i64>>,
}

/// Decide multiplicative independence of nonzero integers over the rationals.
///
/// Each |base| becomes a vector of prime exponents; the bases are independent
/// exactly when those vectors are linearly independent, decided by exact
/// integer elimination. A null combination of the vectors yields a relation
/// with product +/-1; a product of -1 is repaired by doubling the relation.
pub fn check_independence(bases: &[i64]) -> Result<IndependenceVerdict, StructureError> {
    if bases.is_empty() {
        return Err(StructureError::EmptyBases);
    }
    if bases.contains(&0) {
        return Err(StructureError::ZeroBase);
    }
    // A base of 1 or -1 is a dependence on its own.
    if let Some(i) = bases.iter().position(|&a| a.unsigned_abs() == 1) {
        let mut relation = vec![0i64; bases.len()];
        relation[i] = if bases[i] == 1 { 1 } else { 2 };
        return Ok(verified_dependent(bases, relation));
    }
    // Exponent matrix over the union of prime supports.
    let facts: Vec<Factorization> = bases
        .iter()
        .map(|&a| factorize(a.unsigned_abs()))
        .collect();
    let mut primes: Vec<u64> = facts
        .iter()
        .flat_map(|f| f.entries().iter().map(|&(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let k = bases.len();
    let m = primes.len();
    // Augment with the identity so a vanished row carries its combination.
    let mut rows: Vec<Vec<BigInt>> = facts
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut row = vec![BigInt::zero(); m + k];
            for &(p, e) in f.entries() {
                let j = primes.binary_search(&p).unwrap();
                row[j] = BigInt::from(e);
            }
            row[m + i] = BigInt::from(1);
            row
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..m {
        let Some(r) = (rank..k).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let pivot = rows[rank][col].clone();
        for r2 in rank + 1..k {
            if rows[r2][col].is_zero() {
                continue;
            }
            let factor = rows[r2][col].clone();
            let (head, tail) = rows.split_at_mut(r2);
            let pivot_row = &head[rank];
            let row = &mut tail[0];
            for c in col..m + k {
                row[c] = &pivot * &row[c] - &factor * &pivot_row[c];
            }
        }
        rank += 1;
        if rank == k {
            break;
        }
    }
    if rank == k {
        return Ok(IndependenceVerdict {
            independent: true,
            relation: None,
        });
    }
    // Row `rank` vanished on the prime columns; its tail is the combination.
    let raw = &rows[rank][m..];
    let g = raw
        .iter()
        .fold(BigInt::zero(), |acc, v| euclid_bigint(acc, v.abs()));
    let mut relation: Vec<i64> = Vec::with_capacity(k);
    for v in raw {
        let reduced = v / &g;
        relation.push(i64::try_from(&reduced).map_err(|_| StructureError::RelationOverflow)?);
    }
    // Canonical sign: first nonzero exponent positive.
    if relation.iter().find(|&&e| e != 0).is_some_and(|&e| e < 0) {
        for e in &mut relation {
            *e = -*e;
        }
    }
    Ok(verified_dependent(bases, relation))
}

fn euclid_bigint(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Repair the relation's sign (square it when the signed product is -1) and
/// check it exactly over the rationals before returning.
fn verified_dependent(bases: &[i64], mut relation: Vec<i64>) -> IndependenceVerdict {
    let negatives: i64 = bases
        .iter()
        .zip(&relation)
        .filter(|(&a, _)| a < 0)
        .map(|(_, &e)| e)
        .sum();
    if negatives.rem_euclid(2) == 1 {
        for e in &mut relation {
            *e *= 2;
        }
    }
    assert!(
        relation_holds(bases, &relation),
        "internal error: dependence relation failed exact verification"
    );
    IndependenceVerdict {
        independent: false,
        relation: Some(relation),
    }
}

/// Exact check that product(bases[i]^relation[i]) = 1 over the rationals:
/// the summed prime-exponent vectors vanish and the sign is even.
pub fn relation_holds(bases: &[i64], relation: &[i64]) -> bool {
    if bases.len() != relation.len() || relation.iter().all(|&e| e == 0) {
        return false;
    }
    let mut exponents: std::collections::HashMap<u64, i128> = std::collections::HashMap::new();
    let mut negatives: i128 = 0;
    for (&a, &e) in bases.iter().zip(relation) {
        if a == 0 {
            return false;
        }
        if a < 0 {
            negatives += e as i128;
        }
        for &(p, pe) in factorize(a.unsigned_abs()).entries() {
            *exponents.entry(p).or_insert(0) += pe as i128 * e as i128;
        }
    }
    negatives.rem_euclid(2) == 0 && exponents.values().all(|&v| v == 0)
}

const MAX_ELEMENTS: u128 = 10_000_000;

/// The set of products bases[1]^e1 * ... * bases[k]^ek over all exponent
/// vectors in [0, N)^k except the origin, stored as exponent vectors.
///
/// Elements are never materialized as integers outside the exact test
/// helpers: with five bases and N = 10 the largest element is near 10^30.
/// Residues mod p are always formed through modular powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    bases: Vec<i64>,
    box_size: u32,
    exps: Vec<u32>, // flat, stride = bases.len(), lexicographic
}

/// Enumerate the N^k - 1 nonzero exponent vectors in lexicographic order
/// after verifying the bases are multiplicatively independent and N >= 2.
pub fn build_generator_set(bases: &[i64], box_size: u32) -> Result<GeneratorSet, StructureError> {
    let verdict = check_independence(bases)?;
    if let Some(relation) = verdict.relation {
        return Err(StructureError::DependentBases {
            bases: bases.to_vec(),
            relation,
        });
    }
    if box_size < 2 {
        return Err(StructureError::BoxTooSmall);
    }
    let k = bases.len();
    let count = (box_size as u128).pow(k as u32) - 1;
    if count > MAX_ELEMENTS {
        return Err(StructureError::BoxTooLarge(count));
    }
    let mut exps = Vec::with_capacity(count as usize * k);
    let mut vector = vec![0u32; k];
    for _ in 0..count {
        // Mixed-radix increment, last coordinate fastest: lexicographic order.
        for d in (0..k).rev() {
            if vector[d] + 1 < box_size {
                vector[d] += 1;
                break;
            }
            vector[d] = 0;
        }
        exps.extend_from_slice(&vector);
    }
    Ok(GeneratorSet {
        bases: bases.to_vec(),
        box_size,
        exps,
    })
}

impl GeneratorSet {
    pub fn bases(&self) -> &[i64] {
        &self.bases
    }

    pub fn box_size(&self) -> u32 {
        self.box_size
    }

    pub fn len(&self) -> usize {
        self.exps.len() / self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent vector of element `i` (lexicographic enumeration order).
    pub fn element(&self, i: usize) -> &[u32] {
        let k = self.bases.len();
        &self.exps[i * k..(i + 1) * k]
    }

    /// Residue of element `i` modulo `p`, via modular powers of the bases.
    /// Requires p to divide no base.
    pub fn residue_of(&self, i: usize, p: u64) -> u64 {
        let mut acc = 1 % p;
        for (&a, &e) in self.bases.iter().zip(self.element(i)) {
            acc = mul_mod(acc, pow_mod(residue(a, p), e as u64, p), p);
        }
        acc
    }

    /// Visit `(index, residue mod p)` for every element in enumeration order.
    ///
    /// A depth-first walk over the exponent box shares partial products, so
    /// the whole set costs about one modular multiplication per element.
    /// Requires p to divide no base.
    pub fn for_each_residue(&self, p: u64, mut f: impl FnMut(usize, u64)) {
        let n = self.box_size as u64;
        // pows[i][e] = bases[i]^e mod p
        let pows: Vec<Vec<u64>> = self
            .bases
            .iter()
            .map(|&a| {
                let r = residue(a, p);
                debug_assert!(r != 0, "p divides a base");
                let mut row = Vec::with_capacity(n as usize);
                let mut acc = 1 % p;
                for _ in 0..n {
                    row.push(acc);
                    acc = mul_mod(acc, r, p);
                }
                row
            })
            .collect();
        let mut index = 0usize;
        let mut first = true;
        // Iterative DFS: partial[d] = product of the first d coordinates.
        fn walk(
            pows: &[Vec<u64>],
            d: usize,
            partial: u64,
            p: u64,
            index: &mut usize,
            first: &mut bool,
            f: &mut impl FnMut(usize, u64),
        ) {
            if d == pows.len() {
                if *first {
                    *first = false; // skip the all-zero vector
                } else {
                    f(*index, partial);
                    *index += 1;
                }
                return;
            }
            for e in 0..pows[d].len() {
                let next = if e == 0 {
                    partial
                } else {
                    mul_mod(partial, pows[d][e], p)
                };
                walk(pows, d + 1, next, p, index, first, f);
            }
        }
        walk(&pows, 0, 1 % p, p, &mut index, &mut first, &mut f);
        debug_assert_eq!(index, self.len());
    }

    /// Exact signed value of element `i`, when it fits in an i128.
    pub fn value_exact(&self, i: usize) -> Option<i128> {
        let mut acc: i128 = 1;
        for (&a, &e) in self.bases.iter().zip(self.element(i)) {
            for _ in 0..e {
                acc = acc.checked_mul(a as i128)?;
            }
        }
        Some(acc)
    }
}

/// The pair of density exponents attached to a k-base, size-N exponent box:
/// delta = (1 - 1/(k+1)) (1 - 1/N) and the sharper
/// delta' = (1 - 1/(k+1)) (N^k - N^(k-1)) / (N^k - 1); always delta' > delta.
pub fn delta_exponents(k: u32, box_size: u32) -> (f64, f64) {
    assert!(k >= 1 && box_size >= 2);
    let n = box_size as u64;
    let k64 = k as u64;
    // Single exact-integer divisions keep representable results exact.
    let delta = (k64 * (n - 1)) as f64 / ((k64 + 1) * n) as f64;
    let pow_k = n.pow(k);
    let pow_km1 = n.pow(k - 1);
    let delta_prime = (k64 * (pow_k - pow_km1)) as f64 / ((k64 + 1) * (pow_k - 1)) as f64;
    debug_assert!(delta_prime > delta);
    (delta, delta_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_rough_hand_cases() {
        let s = smooth_rough_split(&factorize(720), 3);
        assert_eq!((s.smooth, s.rough), (144, 5));
        let s = smooth_rough_split(&factorize(1), 10);
        assert_eq!((s.smooth, s.rough), (1, 1));
        let s = smooth_rough_split(&factorize(10), 2);
        assert_eq!((s.smooth, s.rough), (2, 5));
    }

    #[test]
    fn smooth_rough_reconstructs_for_many_inputs() {
        for n in 1u64..=20_000 {
            let f = factorize(n);
            for z in [2u64, 10, 100] {
                let s = smooth_rough_split(&f, z);
                assert_eq!(s.smooth * s.rough, n);
                assert!(factorize(s.smooth).entries().iter().all(|&(p, _)| p <= z));
                assert!(factorize(s.rough).entries().iter().all(|&(p, _)| p > z));
            }
        }
    }

    #[test]
    fn rough_squarefree_cases() {
        assert!(rough_part_squarefree(&factorize(720), 3));
        assert!(!rough_part_squarefree(&factorize(50), 3));
        assert!(rough_part_squarefree(&factorize(50), 5));
        assert!(rough_part_squarefree(&factorize(675), 675));
    }

    #[test]
    fn divisor_interval_hand_cases() {
        assert!(divisor_in_interval(&factorize(12), 3.0, 6.0));
        assert!(!divisor_in_interval(&factorize(10), 3.0, 4.0));
        let m = 5040u64;
        assert!(!divisor_in_interval(&factorize(m), m as f64, 2.0 * m as f64));
        // Interval covering no integers.
        assert!(!divisor_in_interval(&factorize(5040), 10.2, 10.7));
    }

    #[test]
    fn divisor_interval_matches_exhaustive_listing() {
        for n in 1u64..=3_000 {
            let f = factorize(n);
            let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            for (y, z) in [(1.5, 4.0), (3.0, 6.0), (10.0, 50.0), (0.9, 1.0)] {
                let expect = divisors.iter().any(|&d| (d as f64) > y && (d as f64) <= z);
                assert_eq!(divisor_in_interval(&f, y, z), expect, "n={n} ({y},{z}]");
            }
        }
    }

    #[test]
    fn independence_hand_cases() {
        assert!(check_independence(&[2, 3]).unwrap().independent);
        assert!(check_independence(&[6, 10, 15]).unwrap().independent);
        let v = check_independence(&[2, 4]).unwrap();
        assert_eq!(v.relation, Some(vec![2, -1]));
        let v = check_independence(&[2, -2]).unwrap();
        assert_eq!(v.relation, Some(vec![2, -2]));
        let v = check_independence(&[1, 5]).unwrap();
        assert_eq!(v.relation, Some(vec![1, 0]));
        let v = check_independence(&[-1, 5]).unwrap();
        assert_eq!(v.relation, Some(vec![2, 0]));
        assert_eq!(check_independence(&[2, 0]), Err(StructureError::ZeroBase));
        assert_eq!(check_independence(&[]), Err(StructureError::EmptyBases));
    }

    #[test]
    fn independence_relations_verify_exactly() {
        let sets: &[&[i64]] = &[
            &[2, 4],
            &[2, -2],
            &[4, 8],
            &[6, 12, 2],
            &[2, 3, 6],
            &[12, 18, -8, 27],
            &[10, 100],
            &[-2, -4],
            &[6, 10, 15, 36],
        ];
        for bases in sets {
            let v = check_independence(bases).unwrap();
            assert!(!v.independent, "{bases:?}");
            assert!(relation_holds(bases, &v.relation.unwrap()));
        }
    }

    /// Exhaustive oracle: search exponent vectors in [-6, 6]^k for a
    /// nontrivial product equal to 1, exactly over the rationals.
    fn exhaustive_dependent(bases: &[i64]) -> bool {
        let k = bases.len();
        let mut e = vec![-6i64; k];
        loop {
            if e.iter().any(|&x| x != 0) && relation_holds(bases, &e) {
                return true;
            }
            let mut d = 0;
            loop {
                if d == k {
                    return false;
                }
                if e[d] < 6 {
                    e[d] += 1;
                    break;
                }
                e[d] = -6;
                d += 1;
            }
        }
    }

    #[test]
    fn independence_cross_checked_exhaustively_for_pairs() {
        for a in -30i64..=30 {
            for b in a..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let bases = [a, b];
                let v = check_independence(&bases).unwrap();
                if v.independent {
                    assert!(!exhaustive_dependent(&bases), "{bases:?}");
                } else {
                    assert!(relation_holds(&bases, &v.relation.unwrap()), "{bases:?}");
                }
            }
        }
    }

    #[test]
    fn independence_cross_checked_for_sampled_triples() {
        // Deterministic LCG sample over |a_i| <= 30.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = ((state >> 33) % 61) as i64 - 30;
            if v == 0 {
                1
            } else {
                v
            }
        };
        for _ in 0..400 {
            let bases = [next(), next(), next()];
            let v = check_independence(&bases).unwrap();
            if v.independent {
                assert!(!exhaustive_dependent(&bases), "{bases:?}");
            } else {
                assert!(relation_holds(&bases, &v.relation.unwrap()), "{bases:?}");
            }
        }
    }

    #[test]
    fn generator_set_small_boxes() {
        let g = build_generator_set(&[2, 3], 2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.element(0), &[0, 1]);
        assert_eq!(g.element(1), &[1, 0]);
        assert_eq!(g.element(2), &[1, 1]);
        let values: Vec<i128> = (0..3).map(|i| g.value_exact(i).unwrap()).collect();
        assert_eq!(values, vec![3, 2, 6]);

        let g = build_generator_set(&[2], 3).unwrap();
        let values: Vec<i128> = (0..g.len()).map(|i| g.value_exact(i).unwrap()).collect();
        assert_eq!(values, vec![2, 4]);
    }

    #[test]
    fn generator_set_rejections() {
        assert!(matches!(
            build_generator_set(&[2, 4], 2),
            Err(StructureError::DependentBases { .. })
        ));
        assert_eq!(
            build_generator_set(&[2, 3], 1),
            Err(StructureError::BoxTooSmall)
        );
    }

    #[test]
    fn generator_set_residues_match_direct_evaluation() {
        let g = build_generator_set(&[2, 3, 5], 4).unwrap();
        let p = 1009u64;
        let mut seen = 0usize;
        g.for_each_residue(p, |i, r| {
            assert_eq!(r, g.residue_of(i, p), "element {i}");
            let exact = g.value_exact(i).unwrap();
            assert_eq!(r, (exact % p as i128).rem_euclid(p as i128) as u64);
            seen += 1;
        });
        assert_eq!(seen, g.len());
    }

    #[test]
    fn generator_set_of_five_primes_is_divisor_lattice() {
        // Elements of the box over 2,3,5,7,11 with N = 10 are exactly the
        // divisors > 1 of (2*3*5*7*11)^9.
        let g = build_generator_set(&[2, 3, 5, 7, 11], 10).unwrap();
        assert_eq!(g.len(), 99_999);
        let a: i128 = (2i128 * 3 * 5 * 7 * 11).pow(9);
        let mut values: Vec<i128> = (0..g.len()).map(|i| g.value_exact(i).unwrap()).collect();
        values.sort_unstable();
        assert!(values.windows(2).all(|w| w[0] < w[1]), "values distinct");
        assert!(values.iter().all(|&v| v > 1 && a % v == 0));
        // Divisor count of A is 10^5, so every divisor > 1 is present.
        assert_eq!(values.len() as u64 + 1, 100_000);
    }

    #[test]
    fn delta_exponent_values() {
        let (delta, delta_prime) = delta_exponents(5, 10);
        assert_eq!(delta, 0.75);
        let expect = (5.0 / 6.0) * 90_000.0 / 99_999.0;
        assert_eq!(delta_prime, expect);
        assert!(delta_prime > delta);
        assert_eq!(delta_exponents(1, 2).0, 0.25);
    }

    #[test]
    fn delta_prime_exceeds_delta_over_grid() {
        for k in 1..=8 {
            for n in 2..=12 {
                let (d, dp) = delta_exponents(k, n);
                assert!(dp > d, "k={k} N={n}");
                assert!(d > 0.0 && dp < 1.0);
            }
        }
    }

    #[test]
    fn relation_display_format() {
        assert_eq!(relation_display(&[2, 4], &[2, -1]), "2^2 * 4^-1 = 1");
        assert_eq!(relation_display(&[2, 3, 4], &[2, 0, -1]), "2^2 * 4^-1 = 1");
    }
}
