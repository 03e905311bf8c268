//! Independent reference implementations used by the integration and
//! acceptance tests. Each one is written for clarity over speed and shares no
//! code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ndarray::{Array2, ArrayView2};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Published leaderboard rows: team, misses, hits, accuracy, speed, final.
pub const LEADERBOARD: [(&str, usize, usize, f64, u32, f64); 6] = [
    ("Sentimetrix", 1, 39, 38.75, 12, 50.75),
    ("USC", 0, 39, 39.0, 6, 45.0),
    ("DESPIC", 7, 39, 37.25, 6, 43.25),
    ("IBM", 4, 39, 38.0, 5, 43.0),
    ("B. Fusion", 9, 39, 36.75, 5, 41.75),
    ("G. Tech", 56, 38, 24.0, 0, 24.0),
];

/// Accuracy and final score in exact rational arithmetic.
pub fn exact_score(hits: usize, misses: usize, speed: u32) -> (Ratio<i64>, Ratio<i64>) {
    let acc = Ratio::from_integer(hits as i64) - Ratio::new(misses as i64, 4);
    (acc, acc + Ratio::from_integer(speed as i64))
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// ---------------------------------------------------------------- clustering

fn dist(x: ArrayView2<f64>, i: usize, j: usize) -> f64 {
    x.row(i).iter().zip(x.row(j).iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Reference density clustering built from the definitions: core points are
/// joined when within `eps`, each connected set of cores is a cluster, and a
/// non-core point within `eps` of some core joins the cluster holding the
/// smallest core index among its core neighbours' clusters. Cluster labels
/// are the smallest core index in the cluster.
pub fn brute_dbscan(x: ArrayView2<f64>, eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = x.nrows();
    let near: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| dist(x, i, j) <= eps).collect()).collect();
    let core: Vec<bool> = near.iter().map(|v| v.len() >= min_pts).collect();
    // flood fill over cores
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if !core[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = s;
        while let Some(v) = stack.pop() {
            for &w in &near[v] {
                if core[w] && comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            if core[i] {
                Some(comp[i])
            } else {
                near[i].iter().filter(|&&j| core[j]).map(|&j| comp[j]).min()
            }
        })
        .collect()
}

/// True when the two labelings induce the same partition and the same noise
/// set.
pub fn same_partition(a: &[Option<usize>], b: &[Option<usize>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd: BTreeMap<usize, usize> = BTreeMap::new();
    let mut back: BTreeMap<usize, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        match (x, y) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                if *fwd.entry(*x).or_insert(*y) != *y || *back.entry(*y).or_insert(*x) != *x {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Gaussian blobs plus uniform background points in `d` dimensions.
pub fn blob_instance(seed: u64, n: usize, d: usize) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..5usize);
    let centres: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| rng.random_range(-6.0..6.0)).collect()).collect();
    let mut x = Array2::zeros((n, d));
    for i in 0..n {
        if rng.random_bool(0.15) {
            for j in 0..d {
                x[[i, j]] = rng.random_range(-8.0..8.0);
            }
        } else {
            let c = &centres[rng.random_range(0..k)];
            for j in 0..d {
                // sum of uniforms: cheap bell shape
                let e: f64 = (0..4).map(|_| rng.random_range(-0.5..0.5)).sum();
                x[[i, j]] = c[j] + e;
            }
        }
    }
    x
}

// -------------------------------------------------------------------- graphs

/// A random simple digraph on `n` nodes with integer weights in 1..=3.
pub fn random_digraph(seed: u64, n: usize, p: f64) -> Vec<(usize, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(p) {
                arcs.push((i, j, rng.random_range(1..=3) as f64));
            }
        }
    }
    arcs
}

/// PageRank from an explicit dense transition matrix, iterated until the
/// change is below 1e-15. Dangling nodes jump uniformly.
pub fn dense_pagerank(n: usize, arcs: &[(usize, usize, f64)], damping: f64) -> Vec<f64> {
    let mut w = vec![vec![0.0; n]; n];
    for &(i, j, x) in arcs {
        w[i][j] += x;
    }
    let mut m = vec![vec![0.0; n]; n]; // m[j][i]: probability of i -> j
    for i in 0..n {
        let out: f64 = w[i].iter().sum();
        for j in 0..n {
            m[j][i] = if out > 0.0 { damping * w[i][j] / out } else { damping / n as f64 } + (1.0 - damping) / n as f64;
        }
    }
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let next: Vec<f64> = (0..n).map(|j| (0..n).map(|i| m[j][i] * r[i]).sum()).collect();
        let delta: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if delta < 1e-15 {
            break;
        }
    }
    r
}

/// A random simple undirected graph on `n` nodes.
pub fn random_graph(seed: u64, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn all_shortest_paths(adj: &[BTreeSet<usize>], s: usize, t: usize) -> Vec<Vec<usize>> {
    // BFS distances from t, then walk every strictly decreasing route from s
    let n = adj.len();
    let mut d = vec![usize::MAX; n];
    d[t] = 0;
    let mut q = VecDeque::from([t]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    if d[s] == usize::MAX {
        return vec![];
    }
    let mut out = Vec::new();
    let mut stack = vec![vec![s]];
    while let Some(path) = stack.pop() {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path);
            continue;
        }
        for &w in &adj[v] {
            if d[w] + 1 == d[v] {
                let mut p = path.clone();
                p.push(w);
                stack.push(p);
            }
        }
    }
    out
}

/// Betweenness by listing every shortest path of every unordered pair, in
/// exact rationals.
pub fn enumerate_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<Ratio<i64>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut bc = vec![Ratio::from_integer(0); n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = all_shortest_paths(&adj, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as i64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as i64;
                bc[v] += Ratio::new(through, total);
            }
        }
    }
    bc
}

// ------------------------------------------------------------------ temporal

/// Shannon entropy of the gap histogram with bin edges at 2^0 .. 2^20
/// seconds plus an overflow bin, found by scanning the edges.
pub fn histogram_entropy(times: &[i64]) -> f64 {
    let edges: Vec<i64> = (0..=20).map(|i| 1i64 << i).collect();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for w in times.windows(2) {
        let g = w[1] - w[0];
        let bin = edges.iter().position(|&e| g < e).unwrap_or(edges.len());
        *hist.entry(bin).or_default() += 1;
    }
    let n = (times.len() - 1) as f64;
    hist.values().map(|&c| c as f64 / n).map(|p| -p * p.log2()).sum::<f64>().max(0.0)
}

// --------------------------------------------------------------------- hedge

/// Weights after a feedback script, straight from the closed form
/// `w_j = exp(Σ_t x_t f_{j,t})`.
pub fn hedge_closed_form(script: &[(f64, Vec<f64>)], arms: usize) -> Vec<f64> {
    (0..arms).map(|j| script.iter().map(|(x, f)| x * f[j]).sum::<f64>().exp()).collect()
}
