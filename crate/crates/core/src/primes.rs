//! Segmented prime sieve with O(1)-ish prime counting, plus the two
//! empirical prime-input scans: short-interval gaps and the divided
//! prime-counting sum over multipliers.

use num::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numbers sieved per segment (spec default 2^22).
pub const SEGMENT_SIZE: u64 = 1 << 22;

/// Default sieve capacity when none is configured.
pub const DEFAULT_CAPACITY: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum PrimesError {
    #[error("query bound {requested} exceeds sieve capacity {capacity}")]
    Capacity { requested: u64, capacity: u64 },
    #[error("invalid parameters: {0}")]
    Parameter(String),
}

/// Deterministic Miller-Rabin for u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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

/// Simple sieve returning all primes <= n.
pub fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| is_prime[i]).map(|i| i as u64).collect()
}

/// Sieves the half-open range `[lo, hi)` and returns its primes, given base
/// primes covering sqrt(hi). Segments are independent and composable.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi <= lo {
        return vec![];
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len)
        .filter(|&k| !composite[k] && lo + k as u64 >= 2)
        .map(|k| lo + k as u64)
        .collect()
}

/// Completed sieve up to `capacity`, with a per-word running prime count for
/// fast pi(x) queries. Read-only after construction.
pub struct Sieve {
    capacity: u64,
    // bit i of words[w] marks 2*(64w + i) + 1 as prime
    words: Vec<u64>,
    // primes among odd numbers below word w
    cum: Vec<u64>,
}

impl Sieve {
    pub fn new(capacity: u64) -> Self {
        let nwords = (capacity / 2 + 64) as usize / 64 + 1;
        let mut words = vec![!0u64; nwords];
        words[0] &= !1; // 1 is not prime
        let base = simple_sieve((capacity as f64).sqrt() as u64 + 2);
        let mut lo = 3u64;
        while lo <= capacity {
            let hi = (lo + SEGMENT_SIZE).min(capacity + 1);
            for &p in &base {
                if p == 2 {
                    continue;
                }
                if p * p >= hi {
                    break;
                }
                let mut j = (p * p).max(lo.div_ceil(p) * p);
                if j % 2 == 0 {
                    j += p;
                }
                while j < hi {
                    let idx = (j / 2) as usize;
                    words[idx / 64] &= !(1u64 << (idx % 64));
                    j += 2 * p;
                }
            }
            lo = hi;
        }
        // mask out bits beyond capacity
        for (w, word) in words.iter_mut().enumerate() {
            for b in 0..64 {
                let val = 2 * (64 * w as u64 + b) + 1;
                if val > capacity {
                    *word &= !(1u64 << b);
                }
            }
        }
        let mut cum = vec![0u64; words.len()];
        let mut acc = 0u64;
        for (w, cw) in cum.iter_mut().enumerate() {
            *cw = acc;
            acc += words[w].count_ones() as u64;
        }
        Sieve { capacity, words, cum }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    fn check_cap(&self, x: u64) -> Result<(), PrimesError> {
        if x > self.capacity {
            Err(PrimesError::Capacity { requested: x, capacity: self.capacity })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, x: u64) -> bool {
        if x == 2 {
            return true;
        }
        if x < 2 || x.is_multiple_of(2) || x > self.capacity {
            return false;
        }
        let idx = (x / 2) as usize;
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Number of primes <= x (integer argument).
    pub fn prime_count_u64(&self, x: u64) -> Result<u64, PrimesError> {
        self.check_cap(x)?;
        if x < 2 {
            return Ok(0);
        }
        if x == 2 {
            return Ok(1);
        }
        // odd o <= x  <=>  bit index o/2 <= (x-1)/2
        let last = ((x - 1) / 2) as usize;
        let w = last / 64;
        let mask = if last % 64 == 63 { !0u64 } else { (1u64 << (last % 64 + 1)) - 1 };
        Ok(1 + self.cum[w] + (self.words[w] & mask).count_ones() as u64)
    }

    /// Number of primes <= x for a real argument.
    pub fn prime_count(&self, x: f64) -> Result<u64, PrimesError> {
        if x < 0.0 {
            return Err(PrimesError::Parameter(format!("negative argument {x}")));
        }
        self.prime_count_u64(x.floor() as u64)
    }

    /// Sorted primes p with `lo < p <= hi` (real endpoints).
    pub fn primes_in(&self, lo: f64, hi: f64) -> Result<Vec<u64>, PrimesError> {
        if lo < 0.0 || hi < lo {
            return Err(PrimesError::Parameter(format!("bad interval ({lo}, {hi}]")));
        }
        let first = if lo.fract() == 0.0 { lo as u64 + 1 } else { lo.floor() as u64 + 1 };
        let last = hi.floor() as u64;
        self.primes_in_ints(first, last)
    }

    /// Sorted primes in the inclusive integer range `[first, last]`.
    pub fn primes_in_ints(&self, first: u64, last: u64) -> Result<Vec<u64>, PrimesError> {
        if first > last {
            return Ok(vec![]);
        }
        self.check_cap(last)?;
        let mut out = vec![];
        if first <= 2 && last >= 2 {
            out.push(2);
        }
        let mut p = first.max(3);
        if p.is_multiple_of(2) {
            p += 1;
        }
        while p <= last {
            if self.is_prime(p) {
                out.push(p);
            }
            p += 2;
        }
        Ok(out)
    }

    /// Largest prime <= x, if any.
    pub fn prev_prime(&self, x: u64) -> Option<u64> {
        let mut p = x.min(self.capacity);
        while p >= 2 {
            if self.is_prime(p) {
                return Some(p);
            }
            p -= 1;
        }
        None
    }

    /// Smallest prime > x within capacity, if any.
    pub fn next_prime(&self, x: u64) -> Option<u64> {
        let mut p = x + 1;
        while p <= self.capacity {
            if self.is_prime(p) {
                return Some(p);
            }
            p += 1;
        }
        None
    }
}

/// Result of scanning `(x - x^{21/40}, x]` for primes over a range of x.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BhpScanReport {
    pub x_min: u64,
    pub x_max: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
    /// min over x of x^{21/40} - (x - prev_prime(x))
    pub worst_margin: f64,
    pub worst_x: u64,
}

/// Checks for every integer x in `[x_min, x_max]` that `(x - x^{21/40}, x]`
/// contains a prime. Near-boundary cases (float margin < 1) are settled by
/// the exact integer comparison gap^40 < x^21.
pub fn bhp_scan(sieve: &Sieve, x_min: u64, x_max: u64) -> Result<BhpScanReport, PrimesError> {
    if x_min < 2 || x_min > x_max {
        return Err(PrimesError::Parameter(format!("bad scan range [{x_min}, {x_max}]")));
    }
    if x_max > sieve.capacity() {
        return Err(PrimesError::Capacity { requested: x_max, capacity: sieve.capacity() });
    }
    let mut prev = sieve
        .prev_prime(x_min)
        .ok_or_else(|| PrimesError::Parameter("no prime below scan start".into()))?;
    let mut holds = true;
    let mut first_failure = None;
    let mut worst_margin = f64::INFINITY;
    let mut worst_x = x_min;
    for x in x_min..=x_max {
        if sieve.is_prime(x) {
            prev = x;
        }
        let gap = x - prev;
        let margin = (x as f64).powf(21.0 / 40.0) - gap as f64;
        if margin < worst_margin {
            worst_margin = margin;
            worst_x = x;
        }
        let ok = if margin.abs() < 1.0 {
            // exact: gap < x^{21/40}  <=>  gap^40 < x^21
            BigUint::from(gap).pow(40) < BigUint::from(x).pow(21)
        } else {
            margin > 0.0
        };
        if !ok && first_failure.is_none() {
            holds = false;
            first_failure = Some(x);
        }
    }
    Ok(BhpScanReport { x_min, x_max, holds, first_failure, worst_margin, worst_x })
}

/// The divided prime-counting sum over multipliers m <= x^beta, counting
/// primes p with m*p in (x, x + x^alpha].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LmSumReport {
    pub x: u64,
    pub alpha: f64,
    pub beta: f64,
    pub total_count: u64,
    pub per_m_counts: Vec<(u64, u64)>,
    pub primes_distinct: bool,
    /// m * x^alpha <= x for every m <= x^beta; forces distinctness.
    pub distinctness_inequality_holds: bool,
    pub lower_bound_c0xalpha: f64,
}

pub fn lm_sum(
    sieve: &Sieve,
    x: u64,
    alpha: f64,
    beta: f64,
    c0: f64,
) -> Result<LmSumReport, PrimesError> {
    if !(0.0 < beta && beta < alpha && alpha < 0.5) {
        return Err(PrimesError::Parameter(format!(
            "need 0 < beta < alpha < 1/2, got alpha={alpha}, beta={beta}"
        )));
    }
    if x < 2 {
        return Err(PrimesError::Parameter(format!("need x >= 2, got {x}")));
    }
    let xf = x as f64;
    let x_alpha = xf.powf(alpha);
    let upper = xf + x_alpha;
    if upper > sieve.capacity() as f64 {
        return Err(PrimesError::Capacity {
            requested: upper.ceil() as u64,
            capacity: sieve.capacity(),
        });
    }
    let m_max = xf.powf(beta).floor() as u64;
    let mut per_m_counts = Vec::with_capacity(m_max as usize);
    let mut all_primes = Vec::new();
    let mut total = 0u64;
    for m in 1..=m_max {
        // p > x/m exactly: p >= x/m + 1 in integer arithmetic covers both
        // the divisible and non-divisible cases.
        let first = x / m + 1;
        let last = (upper / m as f64).floor() as u64;
        let ps = sieve.primes_in_ints(first, last)?;
        total += ps.len() as u64;
        per_m_counts.push((m, ps.len() as u64));
        all_primes.extend_from_slice(&ps);
    }
    let count_before = all_primes.len();
    all_primes.sort_unstable();
    all_primes.dedup();
    let primes_distinct = all_primes.len() == count_before;
    let distinctness_inequality_holds = m_max as f64 * x_alpha <= xf;
    Ok(LmSumReport {
        x,
        alpha,
        beta,
        total_count: total,
        per_m_counts,
        primes_distinct,
        distinctness_inequality_holds,
        lower_bound_c0xalpha: c0 * x_alpha,
    })
}
