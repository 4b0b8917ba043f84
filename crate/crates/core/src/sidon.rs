//! Brute-force multiplicative Sidon oracle and the private-prime
//! certificate checker that certifies large sets in linear time.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::ConflictWitness;
use crate::primes::is_prime_u64;

pub const DEFAULT_PRODUCT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SidonError {
    #[error("empty input set")]
    EmptyInput,
    #[error("product budget exceeded: {pairs} pairwise products > budget {budget}")]
    BudgetExceeded { pairs: u64, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SidonVerdict {
    Sidon,
    Conflict(ConflictWitness),
}

impl SidonVerdict {
    pub fn is_sidon(&self) -> bool {
        matches!(self, SidonVerdict::Sidon)
    }
}

/// Checks that all pairwise products a*a' (a <= a') are distinct.
///
/// Pairs are inserted in lexicographic (a, b) order over the sorted input;
/// the first collision under this order fixes the returned witness, so the
/// verdict is deterministic.
pub fn is_multiplicative_sidon(elements: &[u64], budget: u64) -> Result<SidonVerdict, SidonError> {
    let mut elems = elements.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() {
        return Err(SidonError::EmptyInput);
    }
    let k = elems.len() as u64;
    let pairs = k * (k + 1) / 2;
    if pairs > budget {
        return Err(SidonError::BudgetExceeded { pairs, budget });
    }
    let mut seen: HashMap<u128, (u64, u64)> = HashMap::with_capacity(pairs as usize);
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i..] {
            let prod = a as u128 * b as u128;
            if let Some(&(c, d)) = seen.get(&prod) {
                return Ok(SidonVerdict::Conflict(ConflictWitness { a: c, b: d, c: a, d: b }));
            }
            seen.insert(prod, (a, b));
        }
    }
    Ok(SidonVerdict::Sidon)
}

/// Per-element factorizations a = m*p with m <= J < p, p prime, and the
/// primes pairwise distinct; these hypotheses force the Sidon property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivatePrimeCertificate {
    #[serde(rename = "J")]
    pub j: u64,
    pub items: Vec<CertItem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertItem {
    pub a: u64,
    pub m: u64,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertViolation {
    /// a != m * p
    Factorization { index: usize, a: u64, m: u64, p: u64 },
    /// m outside [1, J]
    MultiplierOutOfRange { index: usize, m: u64, j: u64 },
    /// p <= J (the bound J < p is strict)
    PrimeNotAboveJ { index: usize, p: u64, j: u64 },
    NotPrime { index: usize, p: u64 },
    DuplicatePrime { first_index: usize, second_index: usize, p: u64 },
}

impl std::fmt::Display for CertViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertViolation::Factorization { index, a, m, p } => {
                write!(f, "item {index}: a = {a} != {m} * {p}")
            }
            CertViolation::MultiplierOutOfRange { index, m, j } => {
                write!(f, "item {index}: multiplier m = {m} outside [1, J = {j}]")
            }
            CertViolation::PrimeNotAboveJ { index, p, j } => {
                write!(f, "item {index}: prime p = {p} not strictly above J = {j}")
            }
            CertViolation::NotPrime { index, p } => {
                write!(f, "item {index}: p = {p} is not prime")
            }
            CertViolation::DuplicatePrime { first_index, second_index, p } => {
                write!(f, "items {first_index} and {second_index} share prime {p}")
            }
        }
    }
}

/// Validates all four certificate invariants; an empty result means the
/// certificate passes. Violations are results, not errors.
pub fn check_certificate(cert: &PrivatePrimeCertificate) -> Vec<CertViolation> {
    let mut violations = vec![];
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for (index, item) in cert.items.iter().enumerate() {
        if item.m as u128 * item.p as u128 != item.a as u128 {
            violations.push(CertViolation::Factorization {
                index,
                a: item.a,
                m: item.m,
                p: item.p,
            });
        }
        if item.m == 0 || item.m > cert.j {
            violations.push(CertViolation::MultiplierOutOfRange { index, m: item.m, j: cert.j });
        }
        if !is_prime_u64(item.p) {
            violations.push(CertViolation::NotPrime { index, p: item.p });
        } else if item.p <= cert.j {
            violations.push(CertViolation::PrimeNotAboveJ { index, p: item.p, j: cert.j });
        }
        if let Some(&first) = seen.get(&item.p) {
            violations.push(CertViolation::DuplicatePrime {
                first_index: first,
                second_index: index,
                p: item.p,
            });
        } else {
            seen.insert(item.p, index);
        }
    }
    violations
}
