mod common;

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use proptest::prelude::*;
use sidongap::matching::{
    deficiency_witness, max_matching, weighted_hall_check, Edge, WeightedBipartiteGraph,
};
use std::collections::HashSet;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn unit_graph(nl: usize, nr: usize, pairs: &HashSet<(usize, usize)>) -> WeightedBipartiteGraph {
    let edges = pairs
        .iter()
        .map(|&(u, v)| Edge { u, v, weight: BigRational::one(), multipliers: vec![] })
        .collect();
    WeightedBipartiteGraph::new(
        (0..nl as u64).collect(),
        (0..nr as u64).collect(),
        edges,
    )
    .unwrap()
}

fn random_pairs(nl: usize, nr: usize) -> impl Strategy<Value = HashSet<(usize, usize)>> {
    prop::collection::hash_set((0..nl, 0..nr), 0..=(nl * nr).min(120))
}

proptest! {
    // Hopcroft-Karp cardinality equals a single-augmenting-path oracle.
    #[test]
    fn hk_matches_kuhn(
        (nl, nr) in (1usize..50, 1usize..50),
        seed in any::<u64>(),
    ) {
        // derive pseudo-random edges from the seed so sizes stay coupled
        let mut pairs = HashSet::new();
        let mut state = seed | 1;
        let count = (nl * nr / 3).min(150);
        for _ in 0..count {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (state >> 33) as usize % nl;
            let v = (state >> 13) as usize % nr;
            pairs.insert((u, v));
        }
        let g = unit_graph(nl, nr, &pairs);
        let mut adj = vec![vec![]; nl];
        for &(u, v) in &pairs {
            adj[u].push(v);
        }
        prop_assert_eq!(max_matching(&g).size(), common::kuhn_matching_size(nl, nr, &adj));
    }

    // Exactly one of {matching covers L, valid deficiency witness} holds,
    // with the witness inequality recounted independently.
    #[test]
    fn witness_matching_dichotomy(pairs in random_pairs(8, 8)) {
        let g = unit_graph(8, 8, &pairs);
        let m = max_matching(&g);
        match deficiency_witness(&g, &m) {
            None => prop_assert!(m.covers_left()),
            Some(w) => {
                prop_assert!(!m.covers_left());
                // independent neighborhood recount over raw pairs
                let s: HashSet<usize> = w.left_set.iter().copied().collect();
                let mut nbhd = HashSet::new();
                for &(u, v) in &pairs {
                    if s.contains(&u) {
                        nbhd.insert(v);
                    }
                }
                prop_assert_eq!(&nbhd, &w.neighborhood.iter().copied().collect::<HashSet<_>>());
                prop_assert!(nbhd.len() < s.len(), "|N(S)| = {} vs |S| = {}", nbhd.len(), s.len());
            }
        }
    }

    // Weighted Hall: row degrees >= L0 and column degrees <= L0 force a
    // left-covering matching. Graphs are sums of weighted injections, so
    // the hypotheses hold exactly by construction.
    #[test]
    fn weighted_hall_implies_covering_matching(
        nl in 1usize..8,
        extra in 0usize..4,
        perms in prop::collection::vec(prop::collection::vec(any::<u16>(), 12), 1..4),
        lambdas in prop::collection::vec(1u32..20, 1..4),
    ) {
        let nr = nl + extra;
        let k = perms.len().min(lambdas.len());
        let total: u32 = lambdas[..k].iter().sum();
        let mut weights: std::collections::BTreeMap<(usize, usize), BigRational> =
            Default::default();
        for (perm_seed, &lam) in perms[..k].iter().zip(&lambdas[..k]) {
            // injection from seeds: pick unused right vertices greedily
            let mut used = vec![false; nr];
            let share = ratio(lam as i64, total as i64);
            for u in 0..nl {
                let mut v = perm_seed[u % perm_seed.len()] as usize % nr;
                while used[v] {
                    v = (v + 1) % nr;
                }
                used[v] = true;
                *weights.entry((u, v)).or_insert_with(BigRational::zero) += share.clone();
            }
        }
        let edges: Vec<Edge> = weights
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, weight: w, multipliers: vec![] })
            .collect();
        let g = WeightedBipartiteGraph::new(
            (0..nl as u64).collect(),
            (0..nr as u64).collect(),
            edges,
        ).unwrap();
        let l0 = ratio(1, 1);
        let r = weighted_hall_check(&g, &l0);
        prop_assert!(r.rows_ok && r.cols_ok, "{r:?}");
        prop_assert!(max_matching(&g).covers_left());
    }

    // Koenig duality on tiny instances: max matching = min vertex cover.
    #[test]
    fn koenig_on_small_graphs(pairs in random_pairs(6, 6)) {
        let g = unit_graph(6, 6, &pairs);
        let edges: Vec<(usize, usize)> = pairs.iter().copied().collect();
        prop_assert_eq!(
            max_matching(&g).size(),
            common::min_vertex_cover_size(6, 6, &edges)
        );
    }

    // Exact rational sums are order-independent.
    #[test]
    fn exact_sums_order_independent(ms in prop::collection::vec(1u64..5000, 1..60)) {
        let forward: BigRational = ms
            .iter()
            .map(|&m| BigRational::new(BigInt::one(), BigInt::from(m)))
            .sum();
        let backward: BigRational = ms
            .iter()
            .rev()
            .map(|&m| BigRational::new(BigInt::one(), BigInt::from(m)))
            .sum();
        prop_assert_eq!(forward, backward);
    }
}
