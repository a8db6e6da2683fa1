//! Multiplicative orders modulo primes, prime powers, and general integers,
//! together with subgroup orders and Carmichael's lambda.
//!
//! For a prime p and an integer a with p not dividing a, the order is the
//! least d >= 1 with a^d = 1 (mod p). For a general modulus n the order of a
//! is taken modulo n', the largest divisor of n coprime to a; this equals the
//! eventual period of the sequence a, a^2, a^3, ... modulo n.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{gcd, lcm_checked, mul_mod, pow_mod, Factorization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("modulus {modulus} divides base {base}")]
    BaseDivisible { base: i64, modulus: u64 },
    #[error("factorization is not a decomposition of {expected}")]
    InconsistentFactorization { expected: u64 },
    #[error("base list is empty")]
    EmptyBases,
    #[error("base must be nonzero")]
    ZeroBase,
}

/// Canonical residue of a signed base modulo `m >= 1`.
#[inline]
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

fn check_decomposes(fact: &Factorization, expected: u64) -> Result<(), OrderError> {
    let mut product = 1u128;
    for &(p, e) in fact.entries() {
        for _ in 0..e {
            product = product.saturating_mul(p as u128);
        }
    }
    if product == expected as u128 {
        Ok(())
    } else {
        Err(OrderError::InconsistentFactorization { expected })
    }
}

/// Order of the residue `r` in the unit group mod the prime `p`, by descent
/// from p - 1: for each prime q | p - 1, divide q out while the power still
/// fixes 1.
///
/// The caller guarantees `p` is prime, `1 <= r < p`, and `fact_p_minus_1`
/// factors p - 1; the result d then satisfies r^d = 1 and r^(d/q) != 1 for
/// every prime q | d.
pub fn order_of_residue(r: u64, p: u64, fact_p_minus_1: &Factorization) -> u64 {
    debug_assert!(r >= 1 && r < p);
    let mut d = p - 1;
    for &(q, _) in fact_p_minus_1.entries() {
        while d % q == 0 && pow_mod(r, d / q, p) == 1 {
            d /= q;
        }
    }
    d
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn order_mod_prime(a: i64, p: u64, fact_p_minus_1: &Factorization) -> Result<u64, OrderError> {
    check_decomposes(fact_p_minus_1, p - 1)?;
    let r = residue(a, p);
    if r == 0 {
        return Err(OrderError::BaseDivisible {
            base: a,
            modulus: p,
        });
    }
    Ok(order_of_residue(r, p, fact_p_minus_1))
}

/// Multiplicative order of `a` modulo `q^e` for a prime `q` not dividing `a`.
///
/// Computed as the order mod q, then lifted: the order mod q^(j+1) is either
/// unchanged or q times the order mod q^j, so at most e - 1 lifts occur.
pub fn order_mod_prime_power(a: i64, q: u64, e: u32) -> Result<u64, OrderError> {
    debug_assert!(crate::arith::is_prime(q));
    let m = q
        .checked_pow(e)
        .unwrap_or_else(|| panic!("{q}^{e} exceeds 64 bits"));
    let r = residue(a, m);
    if r % q == 0 {
        return Err(OrderError::BaseDivisible {
            base: a,
            modulus: q,
        });
    }
    let mut d = order_of_residue(r % q, q, &Factorization::of(q - 1));
    while pow_mod(r, d, m) != 1 {
        d *= q;
    }
    Ok(d)
}

/// Order of `a` modulo `n`: the eventual period of a, a^2, a^3, ... mod n.
///
/// Every prime factor shared with `a` is removed from `n` first; the result
/// is the lcm of the orders modulo the remaining prime powers, and 1 when
/// nothing remains.
pub fn order_mod_n(a: i64, n: u64, fact_n: &Factorization) -> Result<u64, OrderError> {
    if a == 0 {
        return Err(OrderError::ZeroBase);
    }
    assert!(n >= 1, "modulus must be positive");
    check_decomposes(fact_n, n)?;
    let mut order = 1u64;
    for &(q, e) in fact_n.entries() {
        if residue(a, q) == 0 {
            continue;
        }
        let local = order_mod_prime_power(a, q, e)?;
        order = lcm_checked(order, local).expect("local orders divide lambda(n)");
    }
    Ok(order)
}

/// Size of the subgroup of the units mod `p` generated by `bases`: the lcm
/// of the individual orders, since the unit group of a prime modulus is
/// cyclic. Divides p - 1.
pub fn subgroup_order(
    bases: &[i64],
    p: u64,
    fact_p_minus_1: &Factorization,
) -> Result<u64, OrderError> {
    if bases.is_empty() {
        return Err(OrderError::EmptyBases);
    }
    let mut acc = 1u64;
    for &a in bases {
        let d = order_mod_prime(a, p, fact_p_minus_1)?;
        acc = lcm_checked(acc, d).expect("orders divide p - 1");
    }
    Ok(acc)
}

/// Carmichael's lambda: the exponent of the unit group mod the factored
/// number. Odd q^e contributes q^(e-1)(q-1); 2 and 4 contribute 1 and 2;
/// 2^e contributes 2^(e-2) for e >= 3.
pub fn carmichael_lambda(fact_n: &Factorization) -> u64 {
    let mut acc = 1u64;
    for &(q, e) in fact_n.entries() {
        let local = if q == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            q.pow(e - 1) * (q - 1)
        };
        acc = lcm_checked(acc, local).expect("lambda(n) fits in 64 bits for n < 2^64");
    }
    acc
}

/// A computed order together with its inputs, for report rows and replay
/// verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderRecord {
    pub modulus: u64,
    pub base: i64,
    pub order: u64,
}

impl OrderRecord {
    /// Recompute from scratch: base^order = 1 modulo the coprime part of the
    /// modulus, and the order divides lambda of that part.
    pub fn verify(&self) -> bool {
        let mut m = self.modulus;
        loop {
            let g = gcd(residue(self.base, m), m);
            if g == 1 {
                break;
            }
            m /= g;
        }
        if m == 1 {
            return self.order == 1;
        }
        let fact = Factorization::of(m);
        pow_mod(residue(self.base, m), self.order, m) == 1
            && carmichael_lambda(&fact) % self.order == 0
    }
}

/// Subgroup order record for a set of bases modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOrderRecord {
    pub modulus: u64,
    pub bases: Vec<i64>,
    pub subgroup_order: u64,
}

impl MultiOrderRecord {
    pub fn verify(&self) -> bool {
        let fact = Factorization::of(self.modulus - 1);
        subgroup_order(&self.bases, self.modulus, &fact)
            .map(|d| d == self.subgroup_order && (self.modulus - 1) % d == 0)
            .unwrap_or(false)
    }
}

/// Per-prime order computations with a residue-keyed cache.
///
/// Scans evaluating many products of the same bases modulo one prime hit the
/// same residues repeatedly; the cache only memoizes `order_of_residue`, so
/// results are identical with caching disabled. One context per worker keeps
/// results independent of interleaving.
pub struct PrimeOrderContext<'a> {
    p: u64,
    fact: &'a Factorization,
    cache: HashMap<u64, u64>,
}

impl<'a> PrimeOrderContext<'a> {
    pub fn new(p: u64, fact_p_minus_1: &'a Factorization) -> Result<Self, OrderError> {
        check_decomposes(fact_p_minus_1, p - 1)?;
        Ok(Self {
            p,
            fact: fact_p_minus_1,
            cache: HashMap::new(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn fact(&self) -> &Factorization {
        self.fact
    }

    /// Order of a nonzero residue mod p, memoized.
    pub fn order_of(&mut self, r: u64) -> u64 {
        debug_assert!(r >= 1 && r < self.p);
        if let Some(&d) = self.cache.get(&r) {
            return d;
        }
        let d = order_of_residue(r, self.p, self.fact);
        self.cache.insert(r, d);
        d
    }

    /// Order of a signed base, erroring when p divides it.
    pub fn order_of_base(&mut self, a: i64) -> Result<u64, OrderError> {
        let r = residue(a, self.p);
        if r == 0 {
            return Err(OrderError::BaseDivisible {
                base: a,
                modulus: self.p,
            });
        }
        Ok(self.order_of(r))
    }

    /// Residue of the product of `bases[i]^exps[i]` mod p.
    pub fn product_residue(&self, bases: &[i64], exps: &[u32]) -> u64 {
        debug_assert_eq!(bases.len(), exps.len());
        let mut acc = 1 % self.p;
        for (&a, &e) in bases.iter().zip(exps) {
            acc = mul_mod(acc, pow_mod(residue(a, self.p), e as u64, self.p), self.p);
        }
        acc
    }
}
