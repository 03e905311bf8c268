//! Graph construction and kernels: hashtag co-occurrence, retweet and
//! mention networks, PageRank, clustering coefficients, betweenness and
//! Louvain community detection.

mod build;
mod centrality;
mod louvain;

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};

use crate::scalar::Scalar;

pub use build::{expand_keywords, hashtag_cooccurrence, interaction_graph, Interaction};
pub use centrality::{betweenness, local_clustering, pagerank, PageRank, PageRankConfig};
pub use louvain::{louvain, modularity, CommunityAssignment};

/// Undirected weighted graph without self-loops. Nodes are keyed by `K`
/// (user ids, or hashtag strings) and stored densely in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T, K = u64> {
    nodes: Vec<K>,
    index: BTreeMap<K, usize>,
    adj: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar, K: Ord + Clone> Default for WeightedGraph<T, K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar, K: Ord + Clone> WeightedGraph<T, K> {
    pub fn new() -> Self {
        Self { nodes: Vec::new(), index: BTreeMap::new(), adj: Vec::new() }
    }

    pub fn with_nodes(keys: impl IntoIterator<Item = K>) -> Self {
        let mut g = Self::new();
        for k in keys {
            g.add_node(k);
        }
        g
    }

    pub fn add_node(&mut self, key: K) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(key.clone());
        self.index.insert(key, i);
        self.adj.push(BTreeMap::new());
        i
    }

    /// Adds `w` to the weight of edge `{a, b}`. Self-loops and non-positive
    /// weights are ignored.
    pub fn add_edge(&mut self, a: K, b: K, w: T) {
        let (i, j) = (self.add_node(a), self.add_node(b));
        self.add_edge_idx(i, j, w);
    }

    pub fn add_edge_idx(&mut self, i: usize, j: usize, w: T) {
        if i == j || !(w > T::zero()) {
            return;
        }
        *self.adj[i].entry(j).or_insert_with(T::zero) += w;
        *self.adj[j].entry(i).or_insert_with(T::zero) += w;
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> &[K] {
        &self.nodes
    }

    pub fn index_of(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        self.adj[i].iter().map(|(&j, &w)| (j, w))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weight(&self, a: &K, b: &K) -> Option<T> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.adj[i].get(&j).copied()
    }

    /// Each undirected edge once, as `(i, j, w)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.iter().filter(move |(&j, _)| j > i).map(move |(&j, &w)| (i, j, w)))
    }

    /// Scores aligned with `nodes()` as a keyed map.
    pub fn keyed<V: Copy>(&self, values: &[V]) -> BTreeMap<K, V> {
        self.nodes.iter().cloned().zip(values.iter().copied()).collect()
    }
}

impl<T: Scalar, K: Ord + Clone + Display> WeightedGraph<T, K> {
    /// `src dst weight` lines, one per undirected edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (i, j, w) in self.edges() {
            let _ = writeln!(s, "{} {} {}", self.nodes[i], self.nodes[j], w);
        }
        s
    }
}

/// Directed weighted graph; arc weight is interaction multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiGraph<T> {
    nodes: Vec<u64>,
    index: BTreeMap<u64, usize>,
    out: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> Default for DiGraph<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> DiGraph<T> {
    pub fn new() -> Self {
        Self { nodes: Vec::new(), index: BTreeMap::new(), out: Vec::new() }
    }

    pub fn with_nodes(keys: impl IntoIterator<Item = u64>) -> Self {
        let mut g = Self::new();
        for k in keys {
            g.add_node(k);
        }
        g
    }

    pub fn add_node(&mut self, key: u64) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(key);
        self.index.insert(key, i);
        self.out.push(BTreeMap::new());
        i
    }

    pub fn add_arc(&mut self, from: u64, to: u64, w: T) {
        let (i, j) = (self.add_node(from), self.add_node(to));
        if i != j && w > T::zero() {
            *self.out[i].entry(j).or_insert_with(T::zero) += w;
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    pub fn index_of(&self, key: u64) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn arcs_from(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        self.out[i].iter().map(|(&j, &w)| (j, w))
    }

    pub fn arc_weight(&self, from: u64, to: u64) -> Option<T> {
        let (i, j) = (self.index_of(from)?, self.index_of(to)?);
        self.out[i].get(&j).copied()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for m in &self.out {
            for &j in m.keys() {
                d[j] += 1;
            }
        }
        d
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(BTreeMap::len).collect()
    }

    /// Undirected projection; reciprocal arcs merge with summed weight.
    pub fn to_undirected(&self) -> WeightedGraph<T> {
        let mut g = WeightedGraph::with_nodes(self.nodes.iter().copied());
        for (i, m) in self.out.iter().enumerate() {
            for (&j, &w) in m {
                g.add_edge_idx(i, j, w);
            }
        }
        g
    }

    pub fn keyed<V: Copy>(&self, values: &[V]) -> BTreeMap<u64, V> {
        self.nodes.iter().copied().zip(values.iter().copied()).collect()
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (i, m) in self.out.iter().enumerate() {
            for (&j, w) in m {
                let _ = writeln!(s, "{} {} {}", self.nodes[i], self.nodes[j], w);
            }
        }
        s
    }
}
