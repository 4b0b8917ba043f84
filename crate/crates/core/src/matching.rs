//! Bipartite machinery: deterministic Hopcroft-Karp maximum matching,
//! Hall-deficiency witness extraction, and the exact-rational weighted
//! Hall-condition verifier.

use std::collections::{HashSet, VecDeque};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint out of range: ({u}, {v})")]
    BadEndpoint { u: usize, v: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("negative edge weight on ({u}, {v})")]
    NegativeWeight { u: usize, v: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone)]
pub struct Edge {
    /// left vertex index
    pub u: usize,
    /// right vertex index
    pub v: usize,
    pub weight: BigRational,
    /// contributing multipliers, when the edge comes from an interval-prime
    /// instance (weight = sum of 1/m over this list)
    pub multipliers: Vec<u64>,
}

/// Bipartite graph with exact-rational edge weights. Left/right vertices
/// carry external ids; all algorithms work on indices.
#[derive(Debug, Clone)]
pub struct WeightedBipartiteGraph {
    pub left_ids: Vec<u64>,
    pub right_ids: Vec<u64>,
    pub edges: Vec<Edge>,
    adj: Vec<Vec<usize>>, // left index -> edge indices, sorted by right index
}

impl WeightedBipartiteGraph {
    pub fn new(left_ids: Vec<u64>, right_ids: Vec<u64>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = HashSet::new();
        let mut adj = vec![vec![]; left_ids.len()];
        for (idx, e) in edges.iter().enumerate() {
            if e.u >= left_ids.len() || e.v >= right_ids.len() {
                return Err(GraphError::BadEndpoint { u: e.u, v: e.v });
            }
            if !seen.insert((e.u, e.v)) {
                return Err(GraphError::DuplicateEdge { u: e.u, v: e.v });
            }
            if e.weight.is_negative() {
                return Err(GraphError::NegativeWeight { u: e.u, v: e.v });
            }
            adj[e.u].push(idx);
        }
        for list in &mut adj {
            list.sort_by_key(|&idx| edges[idx].v);
        }
        Ok(WeightedBipartiteGraph { left_ids, right_ids, edges, adj })
    }

    pub fn left_len(&self) -> usize {
        self.left_ids.len()
    }

    pub fn right_len(&self) -> usize {
        self.right_ids.len()
    }

    /// Right-vertex indices adjacent to left vertex u, ascending.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(move |&idx| self.edges[idx].v)
    }
}

/// A partial injection from left to right vertices along edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// left index -> matched right index
    pub pairs: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.iter().filter(|p| p.is_some()).count()
    }

    pub fn covers_left(&self) -> bool {
        self.pairs.iter().all(|p| p.is_some())
    }
}

/// Maximum-cardinality matching via Hopcroft-Karp. Vertices are processed
/// in index order and augmentations tie-break by smallest right index, so
/// the result is deterministic.
pub fn max_matching(g: &WeightedBipartiteGraph) -> Matching {
    let nl = g.left_len();
    let nr = g.right_len();
    let mut match_l = vec![usize::MAX; nl];
    let mut match_r = vec![usize::MAX; nr];
    let inf = usize::MAX;
    loop {
        // BFS: layer unmatched left vertices at 0
        let mut dist = vec![inf; nl];
        let mut queue = VecDeque::new();
        for u in 0..nl {
            if match_l[u] == usize::MAX {
                dist[u] = 0;
                queue.push_back(u);
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                let w = match_r[v];
                if w == usize::MAX {
                    found_free = true;
                } else if dist[w] == inf {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found_free {
            break;
        }
        // DFS augmentation along layered paths
        fn dfs(
            g: &WeightedBipartiteGraph,
            u: usize,
            dist: &mut [usize],
            match_l: &mut [usize],
            match_r: &mut [usize],
        ) -> bool {
            let d = std::mem::replace(&mut dist[u], usize::MAX);
            for v in g.neighbors(u) {
                let w = match_r[v];
                if w == usize::MAX
                    || (dist[w] == d + 1 && dfs(g, w, dist, match_l, match_r))
                {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
            false
        }
        let mut progress = false;
        for u in 0..nl {
            if match_l[u] == usize::MAX && dist[u] == 0 {
                progress |= dfs(g, u, &mut dist, &mut match_l, &mut match_r);
            }
        }
        if !progress {
            break;
        }
    }
    Matching {
        pairs: match_l
            .into_iter()
            .map(|v| if v == usize::MAX { None } else { Some(v) })
            .collect(),
    }
}

/// A left set S with |N(S)| < |S|, certifying that no left-covering
/// matching exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyWitness {
    pub left_set: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// Extracts a Hall violator from a maximum matching that fails to cover the
/// left side: S is everything reachable from an unmatched left vertex by
/// alternating paths, and then |N(S)| = |S| - (#unmatched roots) < |S|.
pub fn deficiency_witness(g: &WeightedBipartiteGraph, m: &Matching) -> Option<DeficiencyWitness> {
    let nl = g.left_len();
    let mut match_r = vec![usize::MAX; g.right_len()];
    for (u, p) in m.pairs.iter().enumerate() {
        if let Some(v) = *p {
            match_r[v] = u;
        }
    }
    let roots: Vec<usize> = (0..nl).filter(|&u| m.pairs[u].is_none()).collect();
    if roots.is_empty() {
        return None;
    }
    let mut in_s = vec![false; nl];
    let mut in_n = vec![false; g.right_len()];
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    for &u in &roots {
        in_s[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if !in_n[v] {
                in_n[v] = true;
                let w = match_r[v];
                if w != usize::MAX && !in_s[w] {
                    in_s[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let left_set: Vec<usize> = (0..nl).filter(|&u| in_s[u]).collect();
    let neighborhood: Vec<usize> = (0..g.right_len()).filter(|&v| in_n[v]).collect();
    debug_assert!(neighborhood.len() < left_set.len());
    Some(DeficiencyWitness { left_set, neighborhood })
}

/// Outcome of checking the weighted Hall hypotheses against a threshold L0:
/// every left weighted degree >= L0 and every right weighted degree <= L0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedHallReport {
    pub rows_ok: bool,
    pub cols_ok: bool,
    pub row_offenders: Vec<usize>,
    pub col_offenders: Vec<usize>,
}

/// All sums in exact rational arithmetic; order of summation cannot change
/// the verdict.
pub fn weighted_hall_check(g: &WeightedBipartiteGraph, l0: &BigRational) -> WeightedHallReport {
    let mut row_sums = vec![BigRational::zero(); g.left_len()];
    let mut col_sums = vec![BigRational::zero(); g.right_len()];
    for e in &g.edges {
        row_sums[e.u] += &e.weight;
        col_sums[e.v] += &e.weight;
    }
    let row_offenders: Vec<usize> =
        (0..g.left_len()).filter(|&u| &row_sums[u] < l0).collect();
    let col_offenders: Vec<usize> =
        (0..g.right_len()).filter(|&v| &col_sums[v] > l0).collect();
    WeightedHallReport {
        rows_ok: row_offenders.is_empty(),
        cols_ok: col_offenders.is_empty(),
        row_offenders,
        col_offenders,
    }
}

/// Exact column-sum bound check for interval-prime instances: every column
/// (prime) weighted degree must stay at or below the harmonic sum H_limit,
/// compared in directed-rounding float mode so that huge harmonic
/// denominators never enter the arithmetic.
pub fn columns_below_harmonic(g: &WeightedBipartiteGraph, harmonic_n: u64) -> (bool, Vec<usize>) {
    let bound = harmonic_lower_bound(harmonic_n);
    let mut col_sums = vec![BigRational::zero(); g.right_len()];
    for e in &g.edges {
        col_sums[e.v] += &e.weight;
    }
    let offenders: Vec<usize> = (0..g.right_len())
        .filter(|&v| rational_to_f64_up(&col_sums[v]) > bound)
        .collect();
    (offenders.is_empty(), offenders)
}

/// Exact harmonic sum 1 + 1/2 + ... + 1/n. Only sensible for small n; the
/// denominators grow like e^n.
pub fn harmonic_exact(n: u64) -> BigRational {
    fn range_sum(lo: u64, hi: u64) -> BigRational {
        if lo == hi {
            BigRational::new(BigInt::one(), BigInt::from(lo))
        } else {
            let mid = lo + (hi - lo) / 2;
            range_sum(lo, mid) + range_sum(mid + 1, hi)
        }
    }
    if n == 0 {
        BigRational::zero()
    } else {
        range_sum(1, n)
    }
}

/// Lower bound on the harmonic number H_n in f64, summing small terms first
/// and rounding down after each addition.
pub fn harmonic_lower_bound(n: u64) -> f64 {
    let mut acc = 0.0f64;
    for m in (1..=n).rev() {
        acc = (acc + 1.0 / m as f64).next_down().next_down();
    }
    acc
}

/// f64 upper bound on a nonnegative rational.
pub fn rational_to_f64_up(r: &BigRational) -> f64 {
    r.to_f64().map(|f| f.next_up().next_up()).unwrap_or(f64::INFINITY)
}

// ---------------------------------------------------------------------------
// JSON schema: {"left":[ids],"right":[ids],
//               "edges":[{"u":id,"v":id,"w_num":int,"w_den":int,"ms":[..]}]}
// w_num/w_den are arbitrary-precision JSON integers.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphJson {
    left: Vec<u64>,
    right: Vec<u64>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: u64,
    v: u64,
    w_num: serde_json::Number,
    w_den: serde_json::Number,
    #[serde(default)]
    ms: Vec<u64>,
}

fn bigint_to_number(x: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&x.to_string()).expect("integer literal")
}

fn number_to_bigint(n: &serde_json::Number) -> Result<BigInt, GraphError> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| GraphError::Json(format!("not an integer: {n}")))
}

pub fn graph_to_json(g: &WeightedBipartiteGraph) -> serde_json::Value {
    let edges = g
        .edges
        .iter()
        .map(|e| EdgeJson {
            u: g.left_ids[e.u],
            v: g.right_ids[e.v],
            w_num: bigint_to_number(e.weight.numer()),
            w_den: bigint_to_number(e.weight.denom()),
            ms: e.multipliers.clone(),
        })
        .collect();
    serde_json::to_value(GraphJson {
        left: g.left_ids.clone(),
        right: g.right_ids.clone(),
        edges,
    })
    .expect("graph serialization")
}

pub fn graph_from_json(v: &serde_json::Value) -> Result<WeightedBipartiteGraph, GraphError> {
    let gj: GraphJson =
        serde_json::from_value(v.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
    let lookup = |ids: &[u64], id: u64| ids.iter().position(|&x| x == id);
    let mut edges = Vec::with_capacity(gj.edges.len());
    for e in &gj.edges {
        let u = lookup(&gj.left, e.u)
            .ok_or_else(|| GraphError::Json(format!("unknown left id {}", e.u)))?;
        let v = lookup(&gj.right, e.v)
            .ok_or_else(|| GraphError::Json(format!("unknown right id {}", e.v)))?;
        let num = number_to_bigint(&e.w_num)?;
        let den = number_to_bigint(&e.w_den)?;
        if den.is_zero() {
            return Err(GraphError::Json("zero weight denominator".into()));
        }
        edges.push(Edge {
            u,
            v,
            weight: BigRational::new(num, den),
            multipliers: e.ms.clone(),
        });
    }
    WeightedBipartiteGraph::new(gj.left, gj.right, edges)
}
