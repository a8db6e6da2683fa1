//! Exact 64-bit arithmetic: modular products and powers, deterministic
//! primality, complete factorization, and segmented prime sieving.
//!
//! Every value is a natural number below 2^64 (`u64`). Products are formed
//! through 128-bit intermediates, so all results are exact for every
//! admissible input; operations that could wrap either widen or return an
//! error instead.

use thiserror::Error;

/// Errors from the arithmetic layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// `lcm(a, b)` does not fit in 64 bits.
    #[error("lcm({0}, {1}) overflows 64 bits")]
    LcmOverflow(u64, u64),
    /// A factorization's entries are not a valid prime-power decomposition.
    #[error("invalid factorization: {0}")]
    BadFactorization(String),
}

/// `(a * b) mod m`, exact for every `m >= 1`.
///
/// Panics on a zero modulus, matching the behaviour of `%` on integers.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    assert!(m != 0, "invalid modulus: 0");
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply; `pow_mod(a, 0, m) == 1 % m`.
///
/// Panics on a zero modulus.
#[inline]
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m != 0, "invalid modulus: 0");
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Greatest common divisor; `gcd(0, b) == b`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple, erroring on 64-bit overflow instead of wrapping.
pub fn lcm_checked(a: u64, b: u64) -> Result<u64, ArithError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or(ArithError::LcmOverflow(a, b))
}

/// Witnesses making the strong-probable-prime test deterministic for all
/// n < 3.3 * 10^24, in particular for every 64-bit input.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n is odd and > 37 here.
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Complete prime-power decomposition of a positive 64-bit integer, entries
/// strictly increasing by prime.
///
/// The factorization of 1 is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    entries: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor `n` by trial division, then Brent-variant rho with primality
    /// certification of every cofactor. Deterministic run-to-run.
    pub fn of(n: u64) -> Self {
        factorize(n)
    }

    /// Build from explicit entries, validating every invariant: primes
    /// strictly increasing and prime, exponents >= 1, product fits in u64.
    pub fn from_entries(entries: Vec<(u64, u32)>) -> Result<Self, ArithError> {
        let mut prev = 0u64;
        let mut product = 1u128;
        for &(p, e) in &entries {
            if p <= prev {
                return Err(ArithError::BadFactorization(format!(
                    "primes not strictly increasing at {p}"
                )));
            }
            if e == 0 {
                return Err(ArithError::BadFactorization(format!(
                    "zero exponent on prime {p}"
                )));
            }
            if !is_prime(p) {
                return Err(ArithError::BadFactorization(format!("{p} is not prime")));
            }
            for _ in 0..e {
                product = product.checked_mul(p as u128).ok_or_else(|| {
                    ArithError::BadFactorization("product exceeds 64 bits".into())
                })?;
            }
            prev = p;
        }
        if product > u64::MAX as u128 {
            return Err(ArithError::BadFactorization(
                "product exceeds 64 bits".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// The `(prime, exponent)` pairs in increasing prime order.
    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    /// The factored number.
    pub fn value(&self) -> u64 {
        self.entries
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.entries.len()
    }

    /// Number of divisors of the factored value.
    pub fn divisor_count(&self) -> u64 {
        self.entries.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

/// Factor `n >= 1` into prime powers.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut factors: Vec<u64> = Vec::new();
    // Trial division by 2, 3, and the 6k +/- 1 wheel up to 997.
    for d in [2u64, 3] {
        while rest % d == 0 {
            factors.push(d);
            rest /= d;
        }
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= 997 && d * d <= rest {
        while rest % d == 0 {
            factors.push(d);
            rest /= d;
        }
        d += step;
        step = 6 - step;
    }
    if rest > 1 {
        if d * d > rest {
            factors.push(rest);
        } else {
            split_into_primes(rest, &mut factors);
        }
    }
    factors.sort_unstable();
    let mut entries: Vec<(u64, u32)> = Vec::new();
    for p in factors {
        match entries.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => entries.push((p, 1)),
        }
    }
    Factorization { entries }
}

/// Recursively split a number with no prime factor <= 997.
fn split_into_primes(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = brent_rho(n);
    split_into_primes(d, out);
    split_into_primes(n / d, out);
}

/// Find a nontrivial factor of an odd composite `n` by Brent's cycle-finding
/// variant of Pollard rho with batched gcds. The polynomial constant walks a
/// fixed sequence, so the result is deterministic.
fn brent_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    for c in 1..=128u64 {
        if let Some(d) = brent_rho_once(n, c) {
            return d;
        }
    }
    // Unreachable in practice; trial division guarantees termination.
    let mut d = 999u64;
    loop {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
}

fn brent_rho_once(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut d = 1u64;
    while d == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && d == 1 {
            ys = y;
            let m = BATCH.min(r - k);
            for _ in 0..m {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            d = gcd(q, n);
            k += m;
        }
        r <<= 1;
        if r > 1 << 24 {
            return None;
        }
    }
    if d == n {
        // Backtrack one step at a time to recover the factor.
        loop {
            ys = f(ys);
            d = gcd(x.abs_diff(ys), n);
            if d > 1 {
                break;
            }
        }
    }
    (d != n).then_some(d)
}

/// Reusable segmented sieve: base primes up to `sqrt(limit)` are computed
/// once, after which any subrange of `[0, limit]` can be enumerated with
/// memory proportional to the segment size.
pub struct Sieve {
    limit: u64,
    base: Vec<u64>,
}

const SEGMENT: u64 = 1 << 18;

impl Sieve {
    /// Prepare base primes for sieving ranges with upper bound `limit`.
    pub fn to(limit: u64) -> Self {
        let root = limit.isqrt();
        let mut is_comp = vec![false; root as usize + 1];
        let mut base = Vec::new();
        for i in 2..=root {
            if !is_comp[i as usize] {
                base.push(i);
                let mut j = i * i;
                while j <= root {
                    is_comp[j as usize] = true;
                    j += i;
                }
            }
        }
        Self { limit, base }
    }

    /// Primes in `[lo, hi]`, ascending. Empty when `lo > hi`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        assert!(hi <= self.limit, "range exceeds sieve limit");
        if lo > hi {
            return Vec::new();
        }
        let lo = lo.max(2);
        let mut out = Vec::new();
        let mut seg_lo = lo;
        while seg_lo <= hi {
            let seg_hi = hi.min(seg_lo + SEGMENT - 1);
            let len = (seg_hi - seg_lo + 1) as usize;
            let mut comp = vec![false; len];
            for &p in &self.base {
                if p * p > seg_hi {
                    break;
                }
                let start = p.max(seg_lo.div_ceil(p)) * p;
                let mut j = start;
                while j <= seg_hi {
                    comp[(j - seg_lo) as usize] = true;
                    j += p;
                }
            }
            for (i, &c) in comp.iter().enumerate() {
                if !c {
                    out.push(seg_lo + i as u64);
                }
            }
            if seg_hi == u64::MAX {
                break;
            }
            seg_lo = seg_hi + 1;
        }
        out
    }
}

/// Primes in `[lo, hi]` via a one-shot segmented sieve.
pub fn sieve_primes(lo: u64, hi: u64) -> Vec<u64> {
    if lo > hi {
        return Vec::new();
    }
    Sieve::to(hi).primes_in(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    #[test]
    fn mul_mod_small_cases() {
        assert_eq!(mul_mod(3, 4, 5), 2);
        assert_eq!(mul_mod(0, 123456789, 99991), 0);
        assert_eq!(mul_mod(7, 0, 2), 0);
    }

    #[test]
    fn mul_mod_matches_bignum_oracle_near_word_size() {
        let a = (1u64 << 63) - 1;
        let m = u64::MAX - 58; // 2^64 - 59
        let expect = (BigUint::from(a) * BigUint::from(a)) % BigUint::from(m);
        assert_eq!(BigUint::from(mul_mod(a, a, m)), expect);
    }

    #[test]
    #[should_panic(expected = "invalid modulus")]
    fn mul_mod_rejects_zero_modulus() {
        mul_mod(1, 1, 0);
    }

    #[test]
    fn pow_mod_small_cases() {
        assert_eq!(pow_mod(2, 3, 7), 1);
        assert_eq!(pow_mod(12345, 0, 7), 1);
        assert_eq!(pow_mod(5, 0, 1), 0); // 1 mod 1
    }

    #[test]
    fn pow_mod_fermat_by_direct_multiplication() {
        // 2^10 mod 11 via repeated multiplication.
        let mut acc = 1u64;
        for _ in 0..10 {
            acc = acc * 2 % 11;
        }
        assert_eq!(acc, 1);
        assert_eq!(pow_mod(2, 10, 11), acc);
    }

    #[test]
    #[should_panic(expected = "invalid modulus")]
    fn pow_mod_rejects_zero_modulus() {
        pow_mod(2, 3, 0);
    }

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(lcm_checked(3, 10), Ok(30));
        assert_eq!(lcm_checked(0, 5), Ok(0));
        assert_eq!(
            lcm_checked(1 << 63, 3),
            Err(ArithError::LcmOverflow(1 << 63, 3))
        );
    }

    #[test]
    fn is_prime_known_values() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(u64::MAX)); // 3 * 5 * 17 * ...
    }

    #[test]
    fn is_prime_rejects_strong_pseudoprime_3215031751() {
        // Strong pseudoprime to bases 2, 3, 5, 7; trial division is the oracle.
        let n = 3_215_031_751u64;
        let mut d = 3u64;
        let mut factor = 0;
        while d * d <= n {
            if n % d == 0 {
                factor = d;
                break;
            }
            d += 2;
        }
        assert_eq!(factor, 151);
        assert!(!is_prime(n));
    }

    #[test]
    fn mersenne_61_certified_by_lucas_lehmer() {
        // Independent route: Lucas-Lehmer for 2^61 - 1.
        let m = (1u64 << 61) - 1;
        let mut s = 4u64;
        for _ in 0..59 {
            s = (mul_mod(s, s, m) + m - 2) % m;
        }
        assert_eq!(s, 0);
        assert!(is_prime(m));
    }

    #[test]
    fn is_prime_agrees_with_simple_sieve() {
        let limit = 50_000u64;
        let primes = sieve_primes(0, limit);
        let mut idx = 0;
        for n in 0..=limit {
            let in_sieve = idx < primes.len() && primes[idx] == n;
            if in_sieve {
                idx += 1;
            }
            assert_eq!(is_prime(n), in_sieve, "disagreement at {n}");
        }
    }

    #[test]
    fn factorize_hand_cases() {
        assert_eq!(factorize(720).entries(), &[(2, 4), (3, 2), (5, 1)]);
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(2).entries(), &[(2, 1)]);
        assert_eq!(factorize(97).entries(), &[(97, 1)]);
    }

    #[test]
    fn factorize_large_reconstructs_with_certified_primes() {
        let n = 1_000_000_000_000_000_009u64; // 10^18 + 9
        let f = factorize(n);
        let mut product = 1u128;
        for &(p, e) in f.entries() {
            assert!(is_prime(p));
            for _ in 0..e {
                product *= p as u128;
            }
        }
        assert_eq!(product, n as u128);
    }

    #[test]
    fn factorize_semiprime_of_large_primes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factorize(p * q);
        assert_eq!(f.entries(), &[(q, 1), (p, 1)]);
    }

    #[test]
    fn factorize_prime_power() {
        let p = 1_000_003u64;
        let f = factorize(p * p * p);
        assert_eq!(f.entries(), &[(p, 3)]);
    }

    #[test]
    fn factorization_from_entries_validates() {
        assert!(Factorization::from_entries(vec![(2, 4), (3, 2), (5, 1)]).is_ok());
        assert!(Factorization::from_entries(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::from_entries(vec![(4, 1)]).is_err());
        assert!(Factorization::from_entries(vec![(2, 0)]).is_err());
    }

    #[test]
    fn factorization_derived_quantities() {
        let f = factorize(720);
        assert_eq!(f.value(), 720);
        assert_eq!(f.omega(), 3);
        assert_eq!(f.divisor_count(), 30);
        assert_eq!(factorize(1).value(), 1);
        assert_eq!(factorize(1).divisor_count(), 1);
    }

    #[test]
    fn sieve_hand_ranges() {
        assert_eq!(sieve_primes(1, 10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(90, 100), vec![97]);
        assert_eq!(sieve_primes(10, 1), Vec::<u64>::new());
        assert_eq!(sieve_primes(0, 1), Vec::<u64>::new());
        assert_eq!(sieve_primes(2, 2), vec![2]);
    }

    #[test]
    fn sieve_crosses_segment_boundaries() {
        let sieve = Sieve::to(3 * SEGMENT);
        let got = sieve.primes_in(SEGMENT - 100, SEGMENT + 100);
        let expect: Vec<u64> = (SEGMENT - 100..=SEGMENT + 100)
            .filter(|&n| is_prime(n))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn prime_count_below_one_million() {
        // pi(10^6) recomputed by an independent flat sieve.
        let limit = 1_000_000usize;
        let mut comp = vec![false; limit + 1];
        let mut count = 0u64;
        for i in 2..=limit {
            if !comp[i] {
                count += 1;
                let mut j = i * i;
                while j <= limit {
                    comp[j] = true;
                    j += i;
                }
            }
        }
        assert_eq!(count, 78_498);
        assert_eq!(sieve_primes(1, limit as u64).len() as u64, count);
    }

    proptest! {
        #[test]
        fn mul_mod_agrees_with_bignum(a in any::<u64>(), b in any::<u64>(), m in 1u64..) {
            let (a, b) = (a % m, b % m);
            let expect = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
            prop_assert_eq!(BigUint::from(mul_mod(a, b, m)), expect);
        }

        #[test]
        fn factorize_reconstructs_and_certifies(n in 1u64..1_000_000_000) {
            let f = factorize(n);
            let mut product = 1u64;
            for &(p, e) in f.entries() {
                prop_assert!(is_prime(p));
                product *= p.pow(e);
            }
            prop_assert_eq!(product, n);
        }

        #[test]
        fn sieve_matches_is_prime_filter(lo in 0u64..100_000, span in 0u64..2_000) {
            let hi = lo + span;
            let got = sieve_primes(lo, hi);
            let expect: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
            prop_assert_eq!(got, expect);
        }
    }

    #[test]
    fn factorize_cross_checked_against_trial_division() {
        // Smallest-prime-factor table as an independent oracle.
        let limit = 300_000usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        for n in 1..=limit {
            let mut expect = Vec::new();
            let mut m = n;
            while m > 1 {
                let p = spf[m] as u64;
                let mut e = 0;
                while m % p as usize == 0 {
                    m /= p as usize;
                    e += 1;
                }
                expect.push((p, e));
            }
            assert_eq!(factorize(n as u64).entries(), expect.as_slice(), "n = {n}");
        }
    }
}
