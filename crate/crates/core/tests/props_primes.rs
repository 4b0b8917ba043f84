mod common;

use proptest::prelude::*;
use sidongap::primes::{bhp_scan, lm_sum, Sieve};
use std::sync::OnceLock;

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(40_000))
}

proptest! {
    // Whenever alpha + beta <= 1, the counted primes are distinct, and the
    // structural inequality m * x^alpha <= x holds for all m <= x^beta.
    #[test]
    fn lm_distinctness(
        x in 2u64..20_000,
        alpha_millis in 1u32..499,
        frac in 0.01f64..0.99,
    ) {
        let alpha = alpha_millis as f64 / 1000.0;
        let beta = (alpha.min(1.0 - alpha) * frac).max(1e-4);
        prop_assume!(beta < alpha && alpha + beta <= 1.0);
        let r = lm_sum(sieve(), x, alpha, beta, 0.5).unwrap();
        prop_assert!(r.primes_distinct, "x = {x}, alpha = {alpha}, beta = {beta}: {r:?}");
        prop_assert!(r.distinctness_inequality_holds);
        let sum: u64 = r.per_m_counts.iter().map(|&(_, c)| c).sum();
        prop_assert_eq!(sum, r.total_count);
    }

    // Splitting a scan range never changes the verdict or the worst margin.
    #[test]
    fn bhp_scan_splits(a in 2u64..5_000, len1 in 1u64..2_000, len2 in 1u64..2_000) {
        let b = a + len1;
        let c = b + len2;
        let full = bhp_scan(sieve(), a, c).unwrap();
        let left = bhp_scan(sieve(), a, b).unwrap();
        let right = bhp_scan(sieve(), b + 1, c).unwrap();
        prop_assert_eq!(full.holds, left.holds && right.holds);
        prop_assert_eq!(full.first_failure, left.first_failure.or(right.first_failure));
        let min_margin = left.worst_margin.min(right.worst_margin);
        prop_assert!((full.worst_margin - min_margin).abs() < 1e-12);
    }

    // pi is non-decreasing and counts primes_in consistently.
    #[test]
    fn pi_consistent_with_primes_in(lo in 0u64..30_000, len in 0u64..2_000) {
        let hi = lo + len;
        let s = sieve();
        let by_count = s.prime_count_u64(hi).unwrap() - s.prime_count_u64(lo).unwrap();
        let listed = s.primes_in(lo as f64, hi as f64).unwrap().len() as u64;
        prop_assert_eq!(by_count, listed);
    }
}
