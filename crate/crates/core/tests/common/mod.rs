//! Independent reference implementations shared by the property and
//! acceptance suites. Everything here deliberately avoids the library's
//! own code paths for the quantity it checks.

#![allow(dead_code)]

use std::collections::HashSet;

/// Is `set` multiplicative Sidon, by direct product enumeration.
pub fn naive_is_sidon(set: &[u64]) -> bool {
    let mut products = HashSet::new();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i..] {
            if !products.insert(a as u128 * b as u128) {
                return false;
            }
        }
    }
    true
}

/// Gap measure by definition: max of boundary deficits and largest
/// consecutive difference (input sorted, nonempty).
pub fn naive_gap_measure(n: u64, sorted: &[u64]) -> u64 {
    let mut m = (sorted[0] - 1).max(n - sorted[sorted.len() - 1]);
    for w in sorted.windows(2) {
        m = m.max(w[1] - w[0]);
    }
    m
}

/// Exact g(n) by enumerating Sidon chains left to right, minimizing the
/// gap measure. Double-exponential; fine for n <= ~20.
pub fn naive_g(n: u64) -> u64 {
    fn dfs(
        n: u64,
        last: u64,
        partial: u64, // max of leading deficit and internal gaps so far
        chain: &mut Vec<u64>,
        products: &mut HashSet<u128>,
        best: &mut u64,
    ) {
        let here = partial.max(n - last);
        if here < *best {
            *best = here;
        }
        for next in last + 1..=n {
            let new_partial = partial.max(next - last);
            if new_partial >= *best {
                continue;
            }
            let mut added = vec![];
            let mut ok = true;
            for &a in chain.iter().chain(std::iter::once(&next)) {
                let prod = a as u128 * next as u128;
                if !products.insert(prod) {
                    ok = false;
                    break;
                }
                added.push(prod);
            }
            if ok {
                chain.push(next);
                dfs(n, next, new_partial, chain, products, best);
                chain.pop();
            }
            for prod in added {
                products.remove(&prod);
            }
        }
    }

    let mut best = n - 1 + 1; // worse than any achievable measure
    for first in 1..=n {
        if first > best {
            break;
        }
        let mut chain = vec![first];
        let mut products = HashSet::new();
        products.insert(first as u128 * first as u128);
        dfs(n, first, first - 1, &mut chain, &mut products, &mut best);
    }
    best
}

/// Maximum Sidon subset size in [1, n] by full enumeration of Sidon
/// subsets (pruned only on product collisions).
pub fn naive_max_sidon_size(n: u64) -> u64 {
    fn dfs(
        n: u64,
        from: u64,
        chain: &mut Vec<u64>,
        products: &mut HashSet<u128>,
        best: &mut u64,
    ) {
        *best = (*best).max(chain.len() as u64);
        for x in from..=n {
            let mut added = vec![];
            let mut ok = true;
            for &a in chain.iter().chain(std::iter::once(&x)) {
                let prod = a as u128 * x as u128;
                if !products.insert(prod) {
                    ok = false;
                    break;
                }
                added.push(prod);
            }
            if ok {
                chain.push(x);
                dfs(n, x + 1, chain, products, best);
                chain.pop();
            }
            for prod in added {
                products.remove(&prod);
            }
        }
    }
    let mut best = 0;
    dfs(n, 1, &mut vec![], &mut HashSet::new(), &mut best);
    best
}

/// Single-augmenting-path (Kuhn) maximum matching, as an independent
/// cardinality oracle for Hopcroft-Karp.
pub fn kuhn_matching_size(nl: usize, nr: usize, adj: &[Vec<usize>]) -> usize {
    fn try_augment(
        u: usize,
        adj: &[Vec<usize>],
        match_r: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &v in &adj[u] {
            if !visited[v] {
                visited[v] = true;
                if match_r[v].is_none()
                    || try_augment(match_r[v].unwrap(), adj, match_r, visited)
                {
                    match_r[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut match_r = vec![None; nr];
    let mut size = 0;
    for u in 0..nl {
        let mut visited = vec![false; nr];
        if try_augment(u, adj, &mut match_r, &mut visited) {
            size += 1;
        }
    }
    size
}

/// Minimum vertex cover size by exhaustive search (tiny graphs only).
pub fn min_vertex_cover_size(nl: usize, nr: usize, edges: &[(usize, usize)]) -> usize {
    let total = nl + nr;
    assert!(total <= 20);
    let mut best = total;
    for mask in 0u32..(1 << total) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let covered = edges.iter().all(|&(u, v)| {
            mask >> u & 1 == 1 || mask >> (nl + v) & 1 == 1
        });
        if covered {
            best = size;
        }
    }
    best
}

/// Seed for test RNGs, overridable via SIDON_SEED.
pub fn test_seed() -> u64 {
    std::env::var("SIDON_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5EED_51D0)
}
