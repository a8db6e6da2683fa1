//! Skalba representations: positive integers m, n with
//! a^m + a^n + 1 = 0 (mod p). Whenever the order of a exceeds p^(3/4) a
//! representation exists; the search itself works for any order.

use std::collections::HashMap;

use orderlab_core::{
    is_prime, mul_mod, order_mod_prime, residue, Factorization, OrderError,
};

/// Deterministic search core. `ell` must be the order of the nonzero residue
/// `r` mod the prime `p`. The powers r^1..r^ell (all distinct) are tabulated
/// with their exponents, then m runs upward and the first m whose target
/// -1 - r^m lands in the table wins, with n read from the table.
///
/// `table` is scratch space; bulk callers reuse one across primes.
pub fn search_with_table(
    r: u64,
    p: u64,
    ell: u64,
    table: &mut HashMap<u64, u64>,
) -> Option<(u64, u64)> {
    table.clear();
    let mut cur = r;
    for e in 1..=ell {
        table.insert(cur, e);
        cur = mul_mod(cur, r, p);
    }
    let mut cur = r;
    for m in 1..=ell {
        let s = (cur + 1) % p;
        let target = (p - s) % p;
        if let Some(&n) = table.get(&target) {
            return Some((m, n));
        }
        cur = mul_mod(cur, r, p);
    }
    None
}

/// Find the first (m, n) with p | a^m + a^n + 1 and 1 <= m, n <= order of a,
/// scanning m in ascending order; `None` when no representation exists.
pub fn skalba_search(a: i64, p: u64) -> Result<Option<(u64, u64)>, OrderError> {
    assert!(is_prime(p), "modulus must be prime");
    let r = residue(a, p);
    if r == 0 {
        return Err(OrderError::BaseDivisible {
            base: a,
            modulus: p,
        });
    }
    let ell = order_mod_prime(a, p, &Factorization::of(p - 1))?;
    let mut table = HashMap::new();
    Ok(search_with_table(r, p, ell, &mut table))
}

/// Check a claimed representation by direct modular evaluation.
pub fn skalba_verify(a: i64, p: u64, m: u64, n: u64) -> bool {
    let r = residue(a, p);
    let s = (orderlab_core::pow_mod(r, m, p) + orderlab_core::pow_mod(r, n, p)) % p;
    m >= 1 && n >= 1 && (s + 1) % p == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_cases() {
        // 2^1 + 2^2 + 1 = 7.
        assert_eq!(skalba_search(2, 7).unwrap(), Some((1, 2)));
        // 2 + 2 + 1 = 5.
        assert_eq!(skalba_search(2, 5).unwrap(), Some((1, 1)));
        // 4 + 4 + 1 = 9.
        assert_eq!(skalba_search(2, 3).unwrap(), Some((2, 2)));
        for (a, p) in [(2i64, 7u64), (2, 5), (2, 3)] {
            let (m, n) = skalba_search(a, p).unwrap().unwrap();
            assert!(skalba_verify(a, p, m, n));
        }
    }

    #[test]
    fn p_two_has_no_representation() {
        // a odd: a^m + a^n + 1 is odd.
        assert_eq!(skalba_search(3, 2).unwrap(), None);
    }

    #[test]
    fn divisible_base_rejected() {
        assert!(skalba_search(14, 7).is_err());
    }

    #[test]
    fn exponents_stay_within_order() {
        for p in orderlab_core::sieve_primes(3, 500) {
            let ell = order_mod_prime(2, p, &Factorization::of(p - 1)).unwrap();
            if let Some((m, n)) = skalba_search(2, p).unwrap() {
                assert!(1 <= m && m <= ell);
                assert!(1 <= n && n <= ell);
                assert!(skalba_verify(2, p, m, n), "p={p}");
            }
        }
    }

    #[test]
    fn agrees_with_exhaustive_double_loop() {
        for p in orderlab_core::sieve_primes(3, 200) {
            let ell = order_mod_prime(2, p, &Factorization::of(p - 1)).unwrap();
            let mut exhaustive = None;
            'outer: for m in 1..=ell {
                for n in 1..=ell {
                    if skalba_verify(2, p, m, n) {
                        exhaustive = Some(m);
                        break 'outer;
                    }
                }
            }
            let got = skalba_search(2, p).unwrap();
            assert_eq!(got.map(|(m, _)| m), exhaustive, "p={p}");
        }
    }
}
