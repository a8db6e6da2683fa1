//! Frozen regression values from pilot runs. These are observations, not
//! claims: each number was produced once by the scan itself and is pinned
//! here so behaviour changes surface as failures.

use orderlab_scan::config::{EpsilonRule, ScanConfig};
use orderlab_scan::runner::RunnerOpts;
use orderlab_scan::{baseline, conditions, corollary3, ford, matthews, theorem1, theorem2, theorem4};

fn opts() -> RunnerOpts {
    RunnerOpts::with_threads(4)
}

#[test]
fn theorem1_pilot_10k() {
    let config = ScanConfig::new(10_000, vec![2, 3]);
    let report = theorem1::scan_theorem1(2, 3, &config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 1227);
    assert_eq!(report.stats.skipped, 2);
    assert_eq!(report.stats.exceptions, 0);
    // The literal threshold stays below every order at this scale, while
    // the default epsilon floor is near 2, so the variant column flags all.
    assert_eq!(report.stats.variant_exceptions, 1227);
    assert_eq!(report.stats.good, 856);
    assert_eq!(report.stats.gm_below_bound_good, 0);
    assert!(theorem1::exceptions_replay(&report));
}

#[test]
fn theorem2_pilot_pairs_and_quintuple() {
    let config = ScanConfig::new(10_000, vec![2, 3]);
    let report = theorem2::scan_theorem2(&[2, 3], 2, &config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 1227);
    assert_eq!(report.stats.exceptions, 0);

    let config = ScanConfig::new(10_000, vec![2, 3, 5, 7, 11]);
    let report = theorem2::scan_theorem2(&[2, 3, 5, 7, 11], 10, &config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 1224);
    assert_eq!(report.stats.exceptions, 0);
    assert_eq!(report.stats.delta, 0.75);
}

#[test]
fn theorem2_single_base_box_flags_small_order_primes() {
    // delta = (1/2)(11/12); orders of 2 fall below p^delta at these moduli.
    let config = ScanConfig::new(10_000, vec![2]);
    let report = theorem2::scan_theorem2(&[2], 12, &config, &opts()).unwrap();
    let moduli: Vec<u64> = report.exceptions.iter().map(|r| r.modulus).collect();
    assert_eq!(
        moduli,
        vec![127, 1801, 2089, 2731, 4513, 5419, 6361, 8191, 9719]
    );
    assert!(theorem2::exceptions_replay(&report));
    // 2^7 = 128 = 1 mod 127: the Mersenne prime has order 7.
    let row = &report.exceptions[0];
    assert_eq!(row.base_orders, vec![7]);
    assert_eq!(row.max_order, 7);
}

#[test]
fn conditions_pilot_100k() {
    let config = ScanConfig::new(100_000, vec![2, 3]);
    let report = conditions::scan_conditions(2, 3, &config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 9590);
    assert_eq!(report.stats.fail_smooth, 599);
    assert_eq!(report.stats.fail_squarefree, 2403);
    assert_eq!(report.stats.fail_orders, 75);
}

#[test]
fn theorem4_pilot_10k_both_epsilon_rules() {
    // Default floor: eps(n) ~ 1.9 at this scale, threshold above n, so every
    // integer is an exception. The inequality checks still run exactly.
    let config = ScanConfig::new(10_000, vec![2, 3]);
    let report = theorem4::scan_theorem4(2, 3, &config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 9999);
    assert_eq!(report.stats.exceptions, 9999);
    assert_eq!(report.stats.prop_failures, 0);

    let mut zero = ScanConfig::new(10_000, vec![2, 3]);
    zero.epsilon_rule = EpsilonRule::Zero;
    let report = theorem4::scan_theorem4(2, 3, &zero, &opts()).unwrap();
    assert_eq!(report.stats.exceptions, 931);
    assert_eq!(report.stats.prop_failures, 0);
    assert_eq!(report.stats.lambda_failures, 15);
    assert_eq!(report.stats.omega_failures, 33);
    assert!(theorem4::exceptions_replay(&report));
}

#[test]
fn corollary3_pilot_small() {
    let config = ScanConfig::new(2_000, vec![2]);
    let report = corollary3::scan_corollary3(&config, &opts()).unwrap();
    assert_eq!(report.stats.scanned, 298); // pi(2000) - 5
    assert_eq!(report.stats.exceptions, 0);
    assert_eq!(report.stats.witnesses, 298);
    assert!(corollary3::witnesses_verify(&report));
}

#[test]
fn baseline_pilot_10k() {
    let config = ScanConfig::new(10_000, vec![2]);
    let report = baseline::erdos_baseline(2, &config, &opts()).unwrap();
    assert_eq!(report.scanned, 1228);
    assert_eq!(report.above, 1211);
}

#[test]
fn divisor_density_pilot_100k() {
    let config = ScanConfig::new(100_000, vec![2]);
    let report = ford::divisor_interval_density(10.0, 100.0, &config, &opts()).unwrap();
    assert_eq!(report.scanned, 9592);
    assert_eq!(report.hits, 7594);
    assert!(report.comparison.is_some());
}

#[test]
fn exception_cap_truncates_but_keeps_totals() {
    let mut config = ScanConfig::new(10_000, vec![2, 3]);
    config.epsilon_rule = EpsilonRule::Zero;
    config.max_exceptions = 10;
    let report = theorem4::scan_theorem4(2, 3, &config, &opts()).unwrap();
    assert_eq!(report.exceptions.len(), 10);
    assert!(report.truncated);
    assert_eq!(report.stats.exceptions, 931);
    // The retained rows are the smallest moduli, independent of threading.
    let solo = theorem4::scan_theorem4(2, 3, &config, &RunnerOpts::with_threads(1)).unwrap();
    assert_eq!(solo, report);
}

#[test]
fn matthews_pilot_counts_small() {
    let config = ScanConfig::new(100_000, vec![2, 3]);
    let report = matthews::scan_matthews(
        &[2, 3],
        &[10.0, 100.0, 1000.0],
        &config,
        &opts(),
    )
    .unwrap();
    let counts: Vec<u64> = report.points.iter().map(|p| p.count).collect();
    // Identical to the 10^6 counts: every prime with joint subgroup of size
    // at most 1000 already lies below 10^5.
    assert_eq!(counts, vec![3, 29, 238]);
}
