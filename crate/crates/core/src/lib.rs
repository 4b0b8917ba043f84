//! Multiplicative Sidon sets with small maximal gaps.
//!
//! A set A of positive integers is a multiplicative Sidon set when all
//! pairwise products a*a' (a <= a') are distinct. This crate builds such
//! sets inside [1, n] with small gap measure, certifies them against
//! brute-force and structural oracles, and explores the prime-interval
//! inputs and exponent parameter space behind the two gap bounds:
//!
//! - [`construct::elementary`]: the mod-q progression achieving gap
//!   measure at most floor(sqrt(n)) for every n;
//! - [`construct::matching_construct`]: the two-phase interval
//!   construction (direct short-interval primes, then a bipartite matching
//!   of intervals to private primes) achieving 2*ceil(2n^alpha).
//!
//! Supporting machinery: a segmented prime sieve with counting queries
//! ([`primes`]), the brute-force Sidon oracle and the private-prime
//! certificate checker ([`sidon`]), deterministic Hopcroft-Karp matching
//! with Hall-deficiency witnesses and the exact-rational weighted Hall
//! verifier ([`matching`]), and exact desk-scale solvers for g(n) and
//! maximum Sidon subset size ([`exact`]).

pub mod construct;
pub mod domain;
pub mod exact;
pub mod matching;
pub mod primes;
pub mod sidon;

pub use domain::{gap_measure, ConflictWitness, GapReport, SidonSet};
