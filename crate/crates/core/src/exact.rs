//! Desk-scale exact solvers: g(n) by feasibility search over gap-bounded
//! Sidon chains, and maximum Sidon subset size by branch and bound. Both
//! provide ground truth for small n.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::elementary;
use crate::domain::{gap_measure, SidonSet};
use crate::primes::simple_sieve;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("n must be a positive integer")]
    ZeroN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub n: u64,
    pub value: u64,
    pub witness: SidonSet,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
    /// for max-size runs: value - pi(n), the prime-count excess
    pub erdos_excess: Option<i64>,
}

struct Exhausted;

/// Set of pairwise products with an undo log, so insertions roll back
/// exactly on backtrack.
struct ProductState {
    seen: HashSet<u128>,
    log: Vec<u128>,
}

impl ProductState {
    fn new() -> Self {
        ProductState { seen: HashSet::new(), log: vec![] }
    }

    /// Adds all products of x against the chain (and x*x); on any collision
    /// rolls back and reports failure.
    fn try_add(&mut self, x: u64, chain: &[u64]) -> bool {
        let mark = self.log.len();
        for &a in chain.iter().chain(std::iter::once(&x)) {
            let prod = a as u128 * x as u128;
            if !self.seen.insert(prod) {
                self.rollback(mark);
                return false;
            }
            self.log.push(prod);
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let prod = self.log.pop().unwrap();
            self.seen.remove(&prod);
        }
    }
}

/// Depth-first feasibility test: is there a Sidon chain with first element
/// <= 1 + l, consecutive steps <= l, reaching within l of n? Children are
/// explored ascending, so a found witness is lexicographically least.
fn feasible_chain(
    n: u64,
    l: u64,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Vec<u64>>, Exhausted> {
    fn dfs(
        n: u64,
        l: u64,
        chain: &mut Vec<u64>,
        state: &mut ProductState,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool, Exhausted> {
        let prev = *chain.last().unwrap();
        if prev + l >= n {
            return Ok(true);
        }
        for next in prev + 1..=(prev + l).min(n) {
            *nodes += 1;
            if *nodes > budget {
                return Err(Exhausted);
            }
            if state.try_add(next, chain) {
                let mark = state.log.len() - chain.len() - 1;
                chain.push(next);
                if dfs(n, l, chain, state, nodes, budget)? {
                    return Ok(true);
                }
                chain.pop();
                state.rollback(mark);
            }
        }
        Ok(false)
    }

    for first in 1..=(1 + l).min(n) {
        *nodes += 1;
        if *nodes > budget {
            return Err(Exhausted);
        }
        let mut state = ProductState::new();
        let mut chain = vec![first];
        assert!(state.try_add(first, &[]));
        if dfs(n, l, &mut chain, &mut state, nodes, budget)? {
            return Ok(Some(chain));
        }
    }
    Ok(None)
}

/// Exact g(n): binary search on L over [0, floor(sqrt(n))] (the elementary
/// construction justifies the upper end), testing feasibility at each L.
pub fn exact_g(n: u64, budget: u64) -> Result<ExactResult, ExactError> {
    if n == 0 {
        return Err(ExactError::ZeroN);
    }
    let elem = elementary(n);
    let mut hi = gap_measure(&elem).measure;
    let mut lo = 0u64;
    let mut witness = elem;
    let mut nodes = 0u64;
    let mut proven = true;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match feasible_chain(n, mid, &mut nodes, budget) {
            Ok(Some(chain)) => {
                hi = mid;
                witness = SidonSet::new(n, chain).expect("nonempty chain");
            }
            Ok(None) => lo = mid + 1,
            Err(Exhausted) => {
                proven = false;
                break;
            }
        }
    }
    Ok(ExactResult {
        n,
        value: hi,
        witness,
        nodes_explored: nodes,
        proven_optimal: proven,
        erdos_excess: None,
    })
}

/// Maximum Sidon subset size in [1, n], branch and bound with the trivial
/// remaining-candidates upper bound.
pub fn max_sidon_size(n: u64, budget: u64) -> Result<ExactResult, ExactError> {
    if n == 0 {
        return Err(ExactError::ZeroN);
    }
    fn dfs(
        n: u64,
        from: u64,
        chain: &mut Vec<u64>,
        best: &mut Vec<u64>,
        state: &mut ProductState,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<(), Exhausted> {
        for x in from..=n {
            // remaining candidates cannot beat the incumbent
            if chain.len() as u64 + (n - x + 1) <= best.len() as u64 {
                break;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Exhausted);
            }
            if state.try_add(x, chain) {
                let mark = state.log.len() - chain.len() - 1;
                chain.push(x);
                if chain.len() > best.len() {
                    *best = chain.clone();
                }
                dfs(n, x + 1, chain, best, state, nodes, budget)?;
                chain.pop();
                state.rollback(mark);
            }
        }
        Ok(())
    }

    let mut chain = vec![];
    let mut best = vec![1u64];
    let mut state = ProductState::new();
    let mut nodes = 0u64;
    let proven = dfs(n, 1, &mut chain, &mut best, &mut state, &mut nodes, budget).is_ok();
    let pi = simple_sieve(n).len() as i64;
    let excess = best.len() as i64 - pi;
    Ok(ExactResult {
        n,
        value: best.len() as u64,
        witness: SidonSet::new(n, best).expect("nonempty"),
        nodes_explored: nodes,
        proven_optimal: proven,
        erdos_excess: Some(excess),
    })
}
