use std::collections::VecDeque;

use super::{DiGraph, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct PageRankConfig<T> {
    pub damping: T,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for PageRankConfig<T> {
    fn default() -> Self {
        Self { damping: T::of(0.85), tol: T::of(1e-10), max_iter: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct PageRank<T> {
    /// Aligned with `graph.nodes()`.
    pub scores: Vec<T>,
    pub iterations: usize,
    /// False when `max_iter` ran out; `scores` then holds the last iterate.
    pub converged: bool,
}

/// Weighted PageRank by power iteration. Arc weights act as multiplicities
/// and dangling mass is spread uniformly.
pub fn pagerank<T: Scalar>(graph: &DiGraph<T>, cfg: PageRankConfig<T>) -> Result<PageRank<T>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let nf = T::of_usize(n);
    let out_w: Vec<T> = (0..n).map(|i| graph.arcs_from(i).map(|(_, w)| w).sum()).collect();
    let mut rank = vec![T::one() / nf; n];
    let mut next = vec![T::zero(); n];
    let teleport = (T::one() - cfg.damping) / nf;

    for it in 1..=cfg.max_iter {
        let dangling: T = (0..n).filter(|&i| out_w[i] == T::zero()).map(|i| rank[i]).sum();
        let base = teleport + cfg.damping * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for i in 0..n {
            if out_w[i] > T::zero() {
                let share = cfg.damping * rank[i] / out_w[i];
                for (j, w) in graph.arcs_from(i) {
                    next[j] += share * w;
                }
            }
        }
        let delta: T = rank.iter().zip(&next).map(|(a, b)| (*a - *b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < cfg.tol {
            return Ok(PageRank { scores: rank, iterations: it, converged: true });
        }
    }
    Ok(PageRank { scores: rank, iterations: cfg.max_iter, converged: false })
}

/// Local clustering coefficient of every node, ignoring weights:
/// `2·triangles / (deg·(deg − 1))`, 0 below degree 2.
pub fn local_clustering<T: Scalar, K: Ord + Clone>(graph: &WeightedGraph<T, K>) -> Vec<T> {
    let n = graph.node_count();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| graph.neighbors(i).map(|(j, _)| j).collect()).collect();
    let mut mark = vec![usize::MAX; n];
    (0..n)
        .map(|v| {
            let d = nbrs[v].len();
            if d < 2 {
                return T::zero();
            }
            for &u in &nbrs[v] {
                mark[u] = v;
            }
            // each triangle seen from both endpoints
            let links: usize = nbrs[v]
                .iter()
                .map(|&u| nbrs[u].iter().filter(|&&w| mark[w] == v).count())
                .sum();
            T::of_usize(links) / T::of_usize(d * (d - 1))
        })
        .collect()
}

/// Unnormalized shortest-path betweenness on the unweighted graph (Brandes).
/// Each unordered pair contributes once; endpoints are excluded.
pub fn betweenness<T: Scalar, K: Ord + Clone>(graph: &WeightedGraph<T, K>) -> Vec<T> {
    let n = graph.node_count();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| graph.neighbors(i).map(|(j, _)| j).collect()).collect();
    let mut cb = vec![T::zero(); n];

    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![T::zero(); n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![T::zero(); n];
    let mut queue = VecDeque::new();

    for s in 0..n {
        stack.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = T::zero();
            dist[v] = -1;
            delta[v] = T::zero();
        }
        sigma[s] = T::one();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &nbrs[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] = sigma[w] + sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] = delta[v] + sigma[v] / sigma[w] * (T::one() + delta[w]);
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }
    let half = T::of(0.5);
    cb.into_iter().map(|x| x * half).collect()
}
