//! Shared domain types: sets claimed to be multiplicative Sidon, their gap
//! measure, and conflict witnesses.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("empty set has no finite gap measure")]
    EmptySet,
    #[error("n must be a positive integer")]
    ZeroAmbient,
    #[error("element {element} out of range [1, {n}]")]
    OutOfRange { element: u64, n: u64 },
}

/// A sorted set of distinct positive integers in `[1, n]`, claimed to be
/// product-distinct. The Sidon property itself is checked by the oracle in
/// [`crate::sidon`], not by this container.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidonSet {
    pub n: u64,
    pub elements: Vec<u64>,
}

impl SidonSet {
    /// Normalizes the input (sort, dedup) and validates the range invariants.
    pub fn new(n: u64, mut elements: Vec<u64>) -> Result<Self, DomainError> {
        if n == 0 {
            return Err(DomainError::ZeroAmbient);
        }
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(DomainError::EmptySet);
        }
        for &a in &elements {
            if a == 0 || a > n {
                return Err(DomainError::OutOfRange { element: a, n });
            }
        }
        Ok(SidonSet { n, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The gap measure of a set together with the window that witnesses it.
///
/// `measure` is the least integer L such that every real window
/// `[x, x+L] ⊆ [1, n]` intersects the set. `witness_window` is an empty
/// window of length `measure - 1` (for `measure >= 1`), demonstrating that
/// no smaller L works.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub leading_deficit: u64,
    pub trailing_deficit: u64,
    pub max_internal_gap: u64,
    pub measure: u64,
    pub witness_window: (f64, f64),
}

/// Computes the gap measure of `set` inside `[1, set.n]`.
///
/// Equals `max(a_1 - 1, n - a_k, max_i (a_{i+1} - a_i))`; a window strictly
/// inside an open gap of length > L exists iff L < that gap, and the two
/// boundary windows force the deficits.
pub fn gap_measure(set: &SidonSet) -> GapReport {
    let elems = &set.elements;
    let n = set.n;
    let first = elems[0];
    let last = *elems.last().unwrap();
    let leading = first - 1;
    let trailing = n - last;
    let mut max_gap = 0u64;
    let mut gap_at = first;
    for w in elems.windows(2) {
        let g = w[1] - w[0];
        if g > max_gap {
            max_gap = g;
            gap_at = w[0];
        }
    }
    let measure = leading.max(trailing).max(max_gap);
    // Empty window of length measure - 1 at the binding location.
    let witness_window = if measure == 0 {
        (first as f64, first as f64)
    } else if measure == leading {
        (1.0, measure as f64)
    } else if measure == max_gap {
        let x = gap_at as f64 + 0.5;
        (x, x + (measure - 1) as f64)
    } else {
        let x = (n - measure + 1) as f64;
        (x, n as f64)
    };
    GapReport {
        leading_deficit: leading,
        trailing_deficit: trailing,
        max_internal_gap: max_gap,
        measure,
        witness_window,
    }
}

/// Four elements of a tested set with `a*b == c*d` but `{a,b} != {c,d}`,
/// refuting the Sidon property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictWitness {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl std::fmt::Display for ConflictWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}*{} = {}*{} = {}",
            self.a,
            self.b,
            self.c,
            self.d,
            self.a as u128 * self.b as u128
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u64, elems: &[u64]) -> SidonSet {
        SidonSet::new(n, elems.to_vec()).unwrap()
    }

    #[test]
    fn gap_measure_examples() {
        assert_eq!(gap_measure(&set(10, &[1, 4, 7, 10])).measure, 3);
        assert_eq!(gap_measure(&set(1, &[1])).measure, 0);
        let r = gap_measure(&set(10, &[2, 3, 5, 7]));
        assert_eq!(r.leading_deficit, 1);
        assert_eq!(r.trailing_deficit, 3);
        assert_eq!(r.max_internal_gap, 2);
        assert_eq!(r.measure, 3);
    }

    #[test]
    fn full_range_measure() {
        assert_eq!(gap_measure(&set(1, &[1])).measure, 0);
        for n in 2..=40 {
            let a: Vec<u64> = (1..=n).collect();
            assert_eq!(gap_measure(&set(n, a.as_slice())).measure, 1);
        }
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(SidonSet::new(5, vec![]), Err(DomainError::EmptySet));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            SidonSet::new(5, vec![1, 6]),
            Err(DomainError::OutOfRange { element: 6, n: 5 })
        ));
        assert!(matches!(
            SidonSet::new(5, vec![0, 3]),
            Err(DomainError::OutOfRange { element: 0, n: 5 })
        ));
    }

    #[test]
    fn witness_window_is_empty_at_measure_minus_one() {
        // For each binding case, the recorded window must miss the set.
        let cases = [
            set(10, &[1, 4, 7, 10]),  // internal gap binds
            set(10, &[5, 6, 7, 10]),  // leading deficit binds
            set(10, &[1, 2, 3, 6]),   // trailing deficit binds
            set(100, &[1, 50, 100]),  // large internal gap
        ];
        for s in cases {
            let r = gap_measure(&s);
            if r.measure == 0 {
                continue;
            }
            let (lo, hi) = r.witness_window;
            assert!(lo >= 1.0 && hi <= s.n as f64);
            assert!((hi - lo - (r.measure as f64 - 1.0)).abs() < 1e-9);
            assert!(
                !s.elements.iter().any(|&a| (a as f64) >= lo && (a as f64) <= hi),
                "window [{lo}, {hi}] should miss {:?}",
                s.elements
            );
        }
    }

    #[test]
    fn serialization_schema() {
        let s = set(10, &[1, 4, 7, 10]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["n"], 10);
        assert_eq!(v["elements"], serde_json::json!([1, 4, 7, 10]));
        let back: SidonSet = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
