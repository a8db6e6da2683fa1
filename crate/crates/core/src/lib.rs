//! Core number theory for order scans: exact 64-bit arithmetic, multiplicative
//! orders modulo primes and general integers, and integer-structure utilities
//! (smooth/rough splits, divisor-interval queries, multiplicative independence,
//! generator boxes).
//!
//! Everything here is a pure function of its inputs and safe to call from any
//! number of threads; the only mutable state is the optional per-worker order
//! cache in [`order::PrimeOrderContext`].

pub mod arith;
pub mod order;
pub mod structure;

pub use arith::{factorize, gcd, is_prime, lcm_checked, mul_mod, pow_mod, sieve_primes,
    ArithError, Factorization, Sieve};
pub use order::{
    carmichael_lambda, order_mod_n, order_mod_prime, order_mod_prime_power, residue,
    subgroup_order, MultiOrderRecord, OrderError, OrderRecord, PrimeOrderContext,
};
pub use structure::{
    build_generator_set, check_independence, delta_exponents, divisor_in_interval,
    relation_display, relation_holds, rough_part_squarefree, smooth_rough_split, GeneratorSet,
    IndependenceVerdict, SmoothRoughSplit, StructureError,
};
