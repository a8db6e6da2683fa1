//! Cross-module invariants at full sweep scales.

use orderlab_core::{
    divisor_in_interval, factorize, gcd, mul_mod, rough_part_squarefree, sieve_primes,
    smooth_rough_split, Factorization, PrimeOrderContext,
};

/// l_g l_h divides l_gh gcd(l_g, l_h)^2 for every pair of units modulo
/// every prime up to 1000; in particular a prime dividing one order but not
/// the other divides the order of the product.
#[test]
fn group_order_lemma_all_pairs_to_1000() {
    for p in sieve_primes(3, 1000) {
        let fact = Factorization::of(p - 1);
        let mut ctx = PrimeOrderContext::new(p, &fact).unwrap();
        let orders: Vec<u64> = (1..p).map(|r| ctx.order_of(r)).collect();
        for g in 1..p {
            let lg = orders[(g - 1) as usize];
            for h in g..p {
                let lh = orders[(h - 1) as usize];
                let lgh = orders[(mul_mod(g, h, p) - 1) as usize];
                let d = gcd(lg, lh);
                assert_eq!(
                    (lgh as u128 * (d as u128 * d as u128)) % (lg as u128 * lh as u128),
                    0,
                    "p={p} g={g} h={h}"
                );
            }
        }
    }
}

/// Interval membership agrees with exhaustive divisor listing up to 10^5.
#[test]
fn divisor_interval_exhaustive_to_100_000() {
    for n in 1u64..=100_000 {
        let fact = factorize(n);
        let mut divisors = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                divisors.push(d);
                if d != n / d {
                    divisors.push(n / d);
                }
            }
            d += 1;
        }
        let root = n as f64;
        for (y, z) in [(2.5, 7.0), (10.0, 31.0), (root.sqrt(), root / 2.0)] {
            if y >= z {
                continue;
            }
            let expect = divisors.iter().any(|&d| (d as f64) > y && (d as f64) <= z);
            assert_eq!(divisor_in_interval(&fact, y, z), expect, "n={n} ({y},{z}]");
        }
    }
}

/// Factorization agrees with a smallest-prime-factor table for every n up
/// to 10^6, and the smooth/rough split multiplies back and separates prime
/// sizes at the three reference thresholds.
#[test]
fn factorization_and_smooth_rough_split_to_1_000_000() {
    const LIMIT: usize = 1_000_000;
    let mut spf = vec![0u32; LIMIT + 1];
    for i in 2..=LIMIT {
        if spf[i] == 0 {
            let mut j = i;
            while j <= LIMIT {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    for n in 1u64..=LIMIT as u64 {
        let fact = factorize(n);
        // Trial-division oracle via the table.
        let mut expect = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = spf[m] as u64;
            let mut e = 0u32;
            while m % p as usize == 0 {
                m /= p as usize;
                e += 1;
            }
            expect.push((p, e));
        }
        assert_eq!(fact.entries(), expect.as_slice(), "n={n}");
        for z in [2u64, 10, 100] {
            let s = smooth_rough_split(&fact, z);
            assert_eq!(s.smooth * s.rough, n, "n={n} z={z}");
            assert!(fact
                .entries()
                .iter()
                .all(|&(p, e)| if p <= z { s.smooth % p.pow(e) == 0 } else { s.rough % p.pow(e) == 0 }));
            if s.rough == 1 {
                assert!(rough_part_squarefree(&fact, z));
            }
        }
    }
}
