mod common;

use proptest::prelude::*;
use sidongap::domain::{gap_measure, SidonSet};

proptest! {
    // Normalizing the input (sort, dedup) never changes the result.
    #[test]
    fn gap_measure_insensitive_to_order_and_duplicates(
        n in 1u64..500,
        raw in prop::collection::vec(1u64..500, 1..40),
        dup_idx in 0usize..40,
    ) {
        let elems: Vec<u64> = raw.iter().map(|&e| (e - 1) % n + 1).collect();
        let mut noisy = elems.clone();
        noisy.push(elems[dup_idx % elems.len()]);
        noisy.reverse();
        let a = gap_measure(&SidonSet::new(n, elems.clone()).unwrap());
        let b = gap_measure(&SidonSet::new(n, noisy).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.measure, common::naive_gap_measure(n, &{
            let mut s = elems; s.sort_unstable(); s.dedup(); s
        }));
    }

    // Every integer window [x, x+L] with L = measure intersects the set;
    // the witness window at L = measure - 1 is empty.
    #[test]
    fn window_scan_agrees_with_measure(
        n in 1u64..200,
        raw in prop::collection::vec(1u64..200, 1..25),
    ) {
        let elems: Vec<u64> = raw.iter().map(|&e| (e - 1) % n + 1).collect();
        let set = SidonSet::new(n, elems).unwrap();
        let r = gap_measure(&set);
        let l = r.measure;
        prop_assert!(l < n || n == 1);
        for x in 1..=n.saturating_sub(l).max(1) {
            let hit = set.elements.iter().any(|&a| a >= x && a <= x + l);
            prop_assert!(hit, "window [{}, {}] missed at L = measure", x, x + l);
        }
        if l > 0 {
            let (lo, hi) = r.witness_window;
            prop_assert!(lo >= 1.0 && hi <= n as f64);
            let empty = !set.elements.iter().any(|&a| a as f64 >= lo && a as f64 <= hi);
            prop_assert!(empty, "witness window [{lo}, {hi}] not empty");
        }
    }

    #[test]
    fn measure_bounds(n in 1u64..300, raw in prop::collection::vec(1u64..300, 1..30)) {
        let elems: Vec<u64> = raw.iter().map(|&e| (e - 1) % n + 1).collect();
        let r = gap_measure(&SidonSet::new(n, elems).unwrap());
        prop_assert_eq!(
            r.measure,
            r.leading_deficit.max(r.trailing_deficit).max(r.max_internal_gap)
        );
        prop_assert!(r.measure <= n.saturating_sub(1));
    }
}
