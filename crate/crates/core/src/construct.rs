//! The two gap-bound constructions: the mod-q arithmetic-progression set
//! and the matching-based interval construction, together with exponent
//! selection and exact parameter derivation.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{gap_measure, DomainError, GapReport, SidonSet};
use crate::matching::{
    deficiency_witness, max_matching, DeficiencyWitness, Edge, GraphError,
    WeightedBipartiteGraph,
};
use crate::primes::{PrimesError, Sieve};
use crate::sidon::{CertItem, PrivatePrimeCertificate};
use num::rational::BigRational;
use num::BigInt;

/// The smaller root of 5a^2 - 13a + 5, the exponent threshold of the
/// matching construction.
pub const RHO: f64 = 0.469_337_613_708_192_5; // (13 - sqrt(69)) / 10

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("q = {q} exceeds the algebra-check budget {budget}")]
    AlgebraBudget { q: u64, budget: u64 },
    #[error("alpha = {0} outside the domain (2/5, 1/2)")]
    AlphaDomain(f64),
    #[error("epsilon = {0} outside (0, 19/40 - rho)")]
    EpsilonDomain(f64),
    #[error("no positive eta found in the feasible region (alpha = {alpha})")]
    Infeasible { alpha: f64 },
    #[error("parameter constraint violated: {0}")]
    Parameter(String),
    #[error("degenerate size: T = {t_total} < 2 for n = {n}")]
    DegenerateSize { n: u64, t_total: u64 },
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

// ---------------------------------------------------------------------------
// Elementary construction and its algebraic verification
// ---------------------------------------------------------------------------

/// The set {a <= n : a = 1 mod floor(sqrt(n))}; Sidon with gap measure at
/// most floor(sqrt(n)).
pub fn elementary(n: u64) -> SidonSet {
    assert!(n >= 1, "n must be positive");
    let q = n.isqrt();
    let mut elems = vec![];
    let mut a = 1u64;
    while a <= n {
        elems.push(a);
        a += q;
    }
    SidonSet::new(n, elems).expect("nonempty by construction")
}

/// Exhaustively checks that `(1+qi)(1+qj) = (1+qk)(1+ql)` with
/// `0 <= i <= j <= q+1`, `0 <= k <= l <= q+1` forces `(i,j) = (k,l)`.
/// Returns `None` when the implication holds, or a counterexample
/// `(i, j, k, l)`.
pub fn verify_theorem1_algebra(
    q: u64,
    budget: u64,
) -> Result<Option<(u64, u64, u64, u64)>, ConstructError> {
    if q > budget {
        return Err(ConstructError::AlgebraBudget { q, budget });
    }
    let mut seen: HashMap<u128, (u64, u64)> = HashMap::new();
    for i in 0..=q + 1 {
        for j in i..=q + 1 {
            let prod = (1 + q as u128 * i as u128) * (1 + q as u128 * j as u128);
            if let Some(&(k, l)) = seen.get(&prod) {
                return Ok(Some((i, j, k, l)));
            }
            seen.insert(prod, (i, j));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Exponent selection
// ---------------------------------------------------------------------------

/// The eta functional F(beta, delta) at a fixed alpha.
pub fn eta_value(alpha: f64, beta: f64, delta: f64) -> f64 {
    1.0 - alpha - (1.0 - alpha * alpha - beta * (2.0 - beta)) / delta
}

/// Supremum of eta over the feasible (beta, delta) box, attained on the
/// boundary beta = alpha, delta = (5 alpha - 2)/3; closed form
/// `1 - alpha - 3(1 - 2 alpha)/(5 alpha - 2)`.
pub fn sup_eta(alpha: f64) -> Result<f64, ConstructError> {
    if !(0.4 < alpha && alpha < 0.5) {
        return Err(ConstructError::AlphaDomain(alpha));
    }
    Ok(1.0 - alpha - 3.0 * (1.0 - 2.0 * alpha) / (5.0 * alpha - 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub eta: f64,
    pub c0: f64,
}

/// Open feasibility window for delta at a given alpha:
/// `(3 alpha - 4/3, (5 alpha - 2)/3)`.
pub fn delta_window(alpha: f64) -> (f64, f64) {
    (3.0 * alpha - 4.0 / 3.0, (5.0 * alpha - 2.0) / 3.0)
}

/// Picks alpha just above RHO and searches the open (beta, delta) box for a
/// positive eta: a 64x64 grid followed by 20 halving coordinate-refinement
/// steps, approaching the supremum from inside. epsilon is clamped to
/// 19/40 - RHO so that alpha always stays below 19/40.
pub fn choose_exponents(epsilon: f64) -> Result<Exponents, ConstructError> {
    let eps_cap = 19.0 / 40.0 - RHO;
    // NaN is rejected too
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(ConstructError::EpsilonDomain(epsilon));
    }
    let alpha = RHO + epsilon.min(eps_cap) / 2.0;
    let (dlo, dhi) = delta_window(alpha);
    let (blo, bhi) = (0.0, alpha);
    const GRID: usize = 64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for bi in 1..=GRID {
        let beta = blo + (bhi - blo) * bi as f64 / (GRID + 1) as f64;
        for di in 1..=GRID {
            let delta = dlo + (dhi - dlo) * di as f64 / (GRID + 1) as f64;
            let v = eta_value(alpha, beta, delta);
            if v > best.0 {
                best = (v, beta, delta);
            }
        }
    }
    let (mut eta, mut beta, mut delta) = best;
    let mut bstep = (bhi - blo) / (GRID + 1) as f64;
    let mut dstep = (dhi - dlo) / (GRID + 1) as f64;
    for _ in 0..20 {
        loop {
            let mut improved = false;
            for (nb, nd) in [
                (beta + bstep, delta),
                (beta - bstep, delta),
                (beta, delta + dstep),
                (beta, delta - dstep),
            ] {
                if nb > blo && nb < bhi && nd > dlo && nd < dhi {
                    let v = eta_value(alpha, nb, nd);
                    if v > eta {
                        eta = v;
                        beta = nb;
                        delta = nd;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        bstep /= 2.0;
        dstep /= 2.0;
    }
    if eta <= 0.0 {
        return Err(ConstructError::Infeasible { alpha });
    }
    Ok(Exponents { alpha, beta, delta, eta, c0: eta / 2.0 })
}

// ---------------------------------------------------------------------------
// Exact floor/ceil of fractional powers
// ---------------------------------------------------------------------------

/// Continued-fraction rational approximation p/q of x with q <= max_den,
/// accepted only when it reproduces x to within tol.
fn approx_rational(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1u64, 0u64, 0u64, 1u64);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        if a < 0.0 || a > max_den as f64 {
            break;
        }
        let a = a as u64;
        let p2 = a.checked_mul(p0)?.checked_add(p1)?;
        let q2 = a.checked_mul(q0)?.checked_add(q1)?;
        if q2 > max_den {
            break;
        }
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        if (p0 as f64 / q0 as f64 - x).abs() < tol {
            return Some((p0, q0));
        }
        let rem = frac - a as f64;
        if rem.abs() < tol {
            break;
        }
        frac = 1.0 / rem;
    }
    if q0 > 0 && (p0 as f64 / q0 as f64 - x).abs() < tol {
        Some((p0, q0))
    } else {
        None
    }
}

/// Largest j with j^q <= base^p, starting from a float guess.
fn exact_floor_pow_rational(base: u64, p: u64, q: u64, guess: u64) -> u64 {
    let target = BigUint::from(base).pow(p as u32);
    let mut j = guess.max(1);
    while BigUint::from(j).pow(q as u32) > target {
        j -= 1;
    }
    while BigUint::from(j + 1).pow(q as u32) <= target {
        j += 1;
    }
    j
}

/// floor(base^exp) with an exact big-integer recheck whenever the float
/// value lands within 1e-6 of an integer and exp admits a small rational
/// form. Boundary errors here would silently corrupt the interval layout.
pub fn checked_floor_pow(base: u64, exp: f64) -> u64 {
    let v = (base as f64).powf(exp);
    let f = v.floor();
    let near_boundary = (v - f) < 1e-6 || (f + 1.0 - v) < 1e-6;
    if near_boundary {
        if let Some((p, q)) = approx_rational(exp, 10_000, 1e-12) {
            return exact_floor_pow_rational(base, p, q, f as u64);
        }
    }
    f as u64
}

/// Smallest h with h >= 2 * base^exp, with the same exact recheck policy.
pub fn checked_ceil_2pow(base: u64, exp: f64) -> u64 {
    let v = 2.0 * (base as f64).powf(exp);
    let c = v.ceil();
    let near_boundary = (v - v.floor()) < 1e-6 || (c - v) < 1e-6;
    if near_boundary {
        if let Some((p, q)) = approx_rational(exp, 10_000, 1e-12) {
            // h = ceil(2 base^{p/q})  <=>  smallest h with h^q >= 2^q base^p
            let target = BigUint::from(2u32).pow(q as u32) * BigUint::from(base).pow(p as u32);
            let mut h = (c as u64).max(1);
            while BigUint::from(h).pow(q as u32) >= target && h > 1 {
                h -= 1;
            }
            while BigUint::from(h).pow(q as u32) < target {
                h += 1;
            }
            return h;
        }
    }
    c as u64
}

/// floor(h^{19/21}), always settled by the exact comparison
/// t^21 <= h^19 < (t+1)^21.
pub fn floor_pow_19_21(h: u64) -> u64 {
    let guess = (h as f64).powf(19.0 / 21.0) as u64;
    exact_floor_pow_rational(h, 19, 21, guess.max(1))
}

// ---------------------------------------------------------------------------
// Parameter derivation
// ---------------------------------------------------------------------------

/// The full parameter bundle of the matching construction. Intervals are
/// `B_i = (iH, (i+1)H]` for `1 <= i < T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: u64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub eta: f64,
    pub c0: f64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "J")]
    pub j: u64,
    /// T = floor(n / H); intervals are indexed 1 <= i < T
    #[serde(rename = "T")]
    pub t_total: u64,
    /// t = min(floor(H^{19/21}), T); intervals below t take a direct prime
    #[serde(rename = "t")]
    pub t_direct: u64,
}

impl ConstructionParams {
    /// Bounds (lo, hi] of interval B_i.
    pub fn interval(&self, i: u64) -> (u64, u64) {
        (i * self.h, (i + 1) * self.h)
    }

    pub fn intervals(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        (1..self.t_total).map(|i| (i, i * self.h, (i + 1) * self.h))
    }
}

pub fn derive_params(
    n: u64,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> Result<ConstructionParams, ConstructError> {
    if n == 0 {
        return Err(ConstructError::Parameter("n must be positive".into()));
    }
    if !(0.0 < beta && beta < alpha && alpha < 0.5) {
        return Err(ConstructError::Parameter(format!(
            "need 0 < beta < alpha < 1/2, got alpha={alpha}, beta={beta}"
        )));
    }
    let (dlo, dhi) = delta_window(alpha);
    if !(dlo < delta && delta < dhi) {
        return Err(ConstructError::Parameter(format!(
            "delta={delta} outside feasibility window ({dlo}, {dhi}) at alpha={alpha}"
        )));
    }
    let h = checked_ceil_2pow(n, alpha);
    let j = checked_floor_pow(n, beta);
    let t_total = n / h;
    if t_total < 2 {
        return Err(ConstructError::DegenerateSize { n, t_total });
    }
    let t_raw = floor_pow_19_21(h);
    debug_assert!(
        BigUint::from(t_raw).pow(21) <= BigUint::from(h).pow(19)
            && BigUint::from(h).pow(19) < BigUint::from(t_raw + 1).pow(21)
    );
    let t_direct = t_raw.min(t_total);
    let eta = eta_value(alpha, beta, delta);
    let c0 = if eta > 0.0 { eta / 2.0 } else { 0.0 };
    Ok(ConstructionParams { n, alpha, beta, delta, eta, c0, h, j, t_total, t_direct })
}

// ---------------------------------------------------------------------------
// Matching construction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryMode {
    /// i < t: the interval itself contains a prime; m = 1
    DirectPrime,
    /// i >= t: prime assigned by the bipartite matching
    Matched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEntry {
    pub i: u64,
    pub m: u64,
    pub p: u64,
    pub a: u64,
    pub mode: EntryMode,
}

/// Per-interval factorizations produced by the construction; convertible to
/// a private-prime certificate for independent checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    #[serde(rename = "J")]
    pub j: u64,
    pub entries: Vec<CertEntry>,
}

impl MatchingCertificate {
    pub fn to_private_prime(&self) -> PrivatePrimeCertificate {
        PrivatePrimeCertificate {
            j: self.j,
            items: self.entries.iter().map(|e| CertItem { a: e.a, m: e.m, p: e.p }).collect(),
        }
    }
}

/// One named runtime verification of an inequality the construction relies
/// on; violations become diagnostics, never invalid sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn check(checks: &mut Vec<CheckRecord>, name: &str, ok: bool, detail: String) {
    checks.push(CheckRecord { name: name.into(), ok, detail });
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConstructStats {
    pub phase1_count: u64,
    pub phase2_count: u64,
    pub graph_left: usize,
    pub graph_right: usize,
    pub graph_edges: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructSuccess {
    pub set: SidonSet,
    pub certificate: MatchingCertificate,
    pub gap: GapReport,
    pub checks: Vec<CheckRecord>,
    pub stats: ConstructStats,
}

#[derive(Debug, Clone)]
pub enum MatchingOutcome {
    Success(Box<ConstructSuccess>),
    /// Phase 1 found an interval without any prime.
    PrimeFreeInterval { i: u64, lo: u64, hi: u64 },
    /// Phase 2 matching cannot cover all intervals; the witness names a
    /// family S of intervals with |N(S)| < |S|.
    Deficient {
        intervals: Vec<u64>,
        neighborhood_size: usize,
        witness: DeficiencyWitness,
    },
}

/// Builds the interval-prime graph for phase-2 intervals `t <= i < T`,
/// excluding the given phase-1 primes. Also verifies, per (i, m), that at
/// most two phase-1 primes p satisfy mp in B_i.
pub fn build_interval_prime_graph(
    sieve: &Sieve,
    params: &ConstructionParams,
    excluded: &HashSet<u64>,
    checks: &mut Vec<CheckRecord>,
) -> Result<WeightedBipartiteGraph, ConstructError> {
    let mut left_ids = vec![];
    let mut interval_edges: Vec<(u64, BTreeMap<u64, Vec<u64>>)> = vec![];
    let mut max_phase1_hits = 0u64;
    let mut m_max_ok = true;
    for i in params.t_direct..params.t_total {
        let (lo, hi) = params.interval(i);
        let m_max = checked_floor_pow(lo, params.beta);
        m_max_ok &= m_max <= params.j;
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for m in 1..=m_max {
            // p > lo/m exactly: integer division covers both boundary cases
            let first = lo / m + 1;
            let last = hi / m;
            let mut hits = 0u64;
            for p in sieve.primes_in_ints(first, last)? {
                if excluded.contains(&p) {
                    hits += 1;
                } else {
                    by_prime.entry(p).or_default().push(m);
                }
            }
            max_phase1_hits = max_phase1_hits.max(hits);
        }
        left_ids.push(i);
        interval_edges.push((i, by_prime));
    }
    check(
        checks,
        "at_most_two_phase1_primes_per_interval_multiplier",
        max_phase1_hits <= 2,
        format!("max phase-1 primes sharing one (i, m): {max_phase1_hits}"),
    );
    check(
        checks,
        "multiplier_bound_within_J",
        m_max_ok,
        format!("floor(x_i^beta) <= J = {} for all phase-2 intervals", params.j),
    );
    let mut right_set: HashSet<u64> = HashSet::new();
    for (_, by_prime) in &interval_edges {
        right_set.extend(by_prime.keys());
    }
    let mut right_ids: Vec<u64> = right_set.into_iter().collect();
    right_ids.sort_unstable();
    let right_pos: HashMap<u64, usize> =
        right_ids.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut edges = vec![];
    for (u, (_, by_prime)) in interval_edges.into_iter().enumerate() {
        for (p, ms) in by_prime {
            let weight = ms
                .iter()
                .map(|&m| BigRational::new(BigInt::from(1), BigInt::from(m)))
                .sum();
            edges.push(Edge { u, v: right_pos[&p], weight, multipliers: ms });
        }
    }
    Ok(WeightedBipartiteGraph::new(left_ids, right_ids, edges)?)
}

/// Runs the two-phase construction: direct primes below t, matched
/// multiplier-prime products from t up.
pub fn matching_construct(
    sieve: &Sieve,
    params: &ConstructionParams,
) -> Result<MatchingOutcome, ConstructError> {
    let max_elem = params.t_total * params.h;
    if max_elem > sieve.capacity() {
        return Err(PrimesError::Capacity {
            requested: max_elem,
            capacity: sieve.capacity(),
        }
        .into());
    }
    let mut checks = vec![];
    let mut entries: Vec<CertEntry> = vec![];

    // Phase 1: smallest prime in each B_i, i < t.
    let mut phase1_primes = HashSet::new();
    let mut min_phase1_prime = u64::MAX;
    for i in 1..params.t_direct.min(params.t_total) {
        let (lo, hi) = params.interval(i);
        match sieve.next_prime(lo) {
            Some(p) if p <= hi => {
                phase1_primes.insert(p);
                min_phase1_prime = min_phase1_prime.min(p);
                entries.push(CertEntry { i, m: 1, p, a: p, mode: EntryMode::DirectPrime });
            }
            _ => return Ok(MatchingOutcome::PrimeFreeInterval { i, lo, hi }),
        }
    }
    let phase1_count = entries.len() as u64;
    if phase1_count > 0 {
        check(
            &mut checks,
            "phase1_primes_above_J",
            min_phase1_prime > params.j,
            format!("min phase-1 prime {min_phase1_prime} vs J = {}", params.j),
        );
    }

    // Phase 2: interval-prime graph and a left-covering matching.
    let mut stats = ConstructStats { phase1_count, ..Default::default() };
    if params.t_direct < params.t_total {
        let graph = build_interval_prime_graph(sieve, params, &phase1_primes, &mut checks)?;
        stats.graph_left = graph.left_len();
        stats.graph_right = graph.right_len();
        stats.graph_edges = graph.edges.len();

        let min_right = graph.right_ids.first().copied().unwrap_or(u64::MAX);
        check(
            &mut checks,
            "phase2_primes_above_J",
            min_right > params.j,
            format!("min candidate prime {min_right} vs J = {}", params.j),
        );
        let xt = params.t_direct as f64 * params.h as f64;
        check(
            &mut checks,
            "xt_power_exceeds_J",
            xt.powf(1.0 - params.beta) > params.j as f64,
            format!("x_t^(1-beta) = {:.3} vs J = {}", xt.powf(1.0 - params.beta), params.j),
        );
        let x_last = (params.t_total - 1) as f64 * params.h as f64;
        check(
            &mut checks,
            "interval_contains_lm_window",
            x_last.powf(params.alpha) < params.h as f64,
            format!(
                "x_i^alpha max = {:.3} vs H = {}",
                x_last.powf(params.alpha),
                params.h
            ),
        );
        if params.c0 > 0.0 {
            // analytic row bound from the proof chain:
            // c0 * x_t^(alpha-beta) > 3 log(3n)
            let lhs = params.c0 * xt.powf(params.alpha - params.beta);
            let rhs = 3.0 * (3.0 * params.n as f64).ln();
            check(
                &mut checks,
                "analytic_row_bound",
                lhs > rhs,
                format!("c0 x_t^(alpha-beta) = {lhs:.3} vs 3 log(3n) = {rhs:.3}"),
            );
        }

        let matching = max_matching(&graph);
        if !matching.covers_left() {
            let witness = deficiency_witness(&graph, &matching).expect("uncovered left vertex");
            let intervals: Vec<u64> =
                witness.left_set.iter().map(|&u| graph.left_ids[u]).collect();
            return Ok(MatchingOutcome::Deficient {
                neighborhood_size: witness.neighborhood.len(),
                intervals,
                witness,
            });
        }
        let edge_by_pair: HashMap<(usize, usize), usize> = graph
            .edges
            .iter()
            .enumerate()
            .map(|(idx, e)| ((e.u, e.v), idx))
            .collect();
        for (u, v) in matching.pairs.iter().enumerate().map(|(u, v)| (u, v.unwrap())) {
            let e = &graph.edges[edge_by_pair[&(u, v)]];
            let i = graph.left_ids[u];
            let p = graph.right_ids[v];
            let m = *e.multipliers.iter().min().expect("edge has a multiplier");
            entries.push(CertEntry { i, m, p, a: m * p, mode: EntryMode::Matched });
            stats.phase2_count += 1;
        }
    }

    entries.sort_by_key(|e| e.i);
    let in_interval = entries.iter().all(|e| {
        let (lo, hi) = params.interval(e.i);
        e.a > lo && e.a <= hi
    });
    check(&mut checks, "one_element_per_interval", in_interval, {
        format!("{} entries for intervals 1..{}", entries.len(), params.t_total)
    });

    let elements: Vec<u64> = entries.iter().map(|e| e.a).collect();
    let set = SidonSet::new(params.n, elements)?;
    let gap = gap_measure(&set);
    check(
        &mut checks,
        "gap_measure_at_most_2H",
        gap.measure <= 2 * params.h,
        format!("gap measure {} vs 2H = {}", gap.measure, 2 * params.h),
    );
    let certificate = MatchingCertificate { j: params.j, entries };
    Ok(MatchingOutcome::Success(Box::new(ConstructSuccess {
        set,
        certificate,
        gap,
        checks,
        stats,
    })))
}
