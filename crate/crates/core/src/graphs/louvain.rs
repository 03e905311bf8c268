//! Two-phase Louvain modularity maximization.
//!
//! Phase one moves single nodes to the neighbouring community with the best
//! modularity gain, scanning nodes in ascending index order; phase two
//! collapses communities into super-nodes. Levels repeat until a local-move
//! phase makes no move.

use std::collections::BTreeMap;

use super::WeightedGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityAssignment<T> {
    /// Community of each node, aligned with `graph.nodes()`. Ids are dense and
    /// numbered by first appearance in node order.
    pub community: Vec<usize>,
    pub modularity: T,
    /// Modularity after each level, starting with the singleton partition.
    pub history: Vec<T>,
}

impl<T> CommunityAssignment<T> {
    pub fn community_count(&self) -> usize {
        self.community.iter().max().map_or(0, |m| m + 1)
    }
}

/// Weighted modularity of a partition of `graph`.
pub fn modularity<T: Scalar, K: Ord + Clone>(graph: &WeightedGraph<T, K>, community: &[usize]) -> T {
    let n = graph.node_count();
    let two_m: T = (0..n).flat_map(|i| graph.neighbors(i).map(|(_, w)| w)).sum();
    if two_m == T::zero() {
        return T::zero();
    }
    let mut internal: BTreeMap<usize, T> = BTreeMap::new();
    let mut total: BTreeMap<usize, T> = BTreeMap::new();
    for i in 0..n {
        for (j, w) in graph.neighbors(i) {
            *total.entry(community[i]).or_insert_with(T::zero) += w;
            if community[i] == community[j] {
                *internal.entry(community[i]).or_insert_with(T::zero) += w;
            }
        }
    }
    total
        .iter()
        .map(|(c, &tot)| {
            let inn = internal.get(c).copied().unwrap_or_else(T::zero);
            inn / two_m - (tot / two_m) * (tot / two_m)
        })
        .sum()
}

/// Level graph: symmetric adjacency without the diagonal, plus self-loop
/// mass `A_ii` stored separately.
struct Level<T> {
    adj: Vec<Vec<(usize, T)>>,
    self_loop: Vec<T>,
}

impl<T: Scalar> Level<T> {
    fn degree(&self, i: usize) -> T {
        self.self_loop[i] + self.adj[i].iter().map(|&(_, w)| w).sum::<T>()
    }

    fn modularity(&self, comm: &[usize], two_m: T) -> T {
        let n = self.adj.len();
        let k = comm.iter().max().map_or(0, |m| m + 1);
        let mut inn = vec![T::zero(); k];
        let mut tot = vec![T::zero(); k];
        for i in 0..n {
            tot[comm[i]] += self.degree(i);
            inn[comm[i]] += self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                if comm[j] == comm[i] {
                    inn[comm[i]] += w;
                }
            }
        }
        (0..k).map(|c| inn[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m)).sum()
    }

    /// Local moves until a full sweep moves nothing. Returns whether any
    /// node changed community.
    fn local_moves(&self, comm: &mut [usize], two_m: T) -> bool {
        let n = self.adj.len();
        let deg: Vec<T> = (0..n).map(|i| self.degree(i)).collect();
        let mut tot = vec![T::zero(); n];
        for i in 0..n {
            tot[comm[i]] += deg[i];
        }
        let eps = T::epsilon() * T::of(16.0);
        let mut any = false;
        let mut link: Vec<T> = vec![T::zero(); n];
        let mut touched: Vec<usize> = Vec::new();
        loop {
            let mut moved = false;
            for i in 0..n {
                let home = comm[i];
                for &(j, w) in &self.adj[i] {
                    let c = comm[j];
                    if link[c] == T::zero() {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                tot[home] -= deg[i];
                let ki = deg[i];
                let gain = |c: usize, l: T| l - tot[c] * ki / two_m;
                let stay = gain(home, link[home]);
                let mut best = (stay, home);
                touched.sort_unstable();
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best.0 + eps {
                        best = (g, c);
                    }
                }
                let target = best.1;
                tot[target] += ki;
                if target != home {
                    comm[i] = target;
                    moved = true;
                    any = true;
                }
                for &c in &touched {
                    link[c] = T::zero();
                }
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        any
    }

    fn aggregate(&self, comm: &[usize], k: usize) -> Level<T> {
        let mut self_loop = vec![T::zero(); k];
        let mut maps: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); k];
        for (i, row) in self.adj.iter().enumerate() {
            let ci = comm[i];
            self_loop[ci] += self.self_loop[i];
            for &(j, w) in row {
                let cj = comm[j];
                if ci == cj {
                    self_loop[ci] += w;
                } else {
                    *maps[ci].entry(cj).or_insert_with(T::zero) += w;
                }
            }
        }
        Level {
            adj: maps.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loop,
        }
    }
}

/// Renumbers labels densely by first appearance.
fn compact(comm: &mut [usize]) -> usize {
    let mut map = BTreeMap::new();
    for c in comm.iter_mut() {
        let next = map.len();
        *c = *map.entry(*c).or_insert(next);
    }
    map.len()
}

pub fn louvain<T: Scalar, K: Ord + Clone>(graph: &WeightedGraph<T, K>) -> CommunityAssignment<T> {
    let n = graph.node_count();
    let mut level = Level {
        adj: (0..n).map(|i| graph.neighbors(i).collect()).collect(),
        self_loop: vec![T::zero(); n],
    };
    let two_m: T = (0..n).map(|i| level.degree(i)).sum();
    let mut assignment: Vec<usize> = (0..n).collect();
    if two_m == T::zero() {
        return CommunityAssignment { community: assignment, modularity: T::zero(), history: vec![T::zero()] };
    }

    let mut history = vec![level.modularity(&assignment, two_m)];
    loop {
        let size = level.adj.len();
        let mut comm: Vec<usize> = (0..size).collect();
        if !level.local_moves(&mut comm, two_m) {
            break;
        }
        let k = compact(&mut comm);
        let q = level.modularity(&comm, two_m);
        for a in assignment.iter_mut() {
            *a = comm[*a];
        }
        history.push(q);
        if k == size {
            break;
        }
        level = level.aggregate(&comm, k);
    }
    compact(&mut assignment);
    let q = modularity(graph, &assignment);
    CommunityAssignment { community: assignment, modularity: q, history }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(g: &mut WeightedGraph<f64>, ids: std::ops::Range<u64>) {
        for a in ids.clone() {
            for b in ids.clone() {
                if a < b {
                    g.add_edge(a, b, 1.0);
                }
            }
        }
    }

    #[test]
    fn empty_edge_set_is_singletons() {
        let g: WeightedGraph<f64> = WeightedGraph::with_nodes(0..5);
        let c = louvain(&g);
        assert_eq!(c.community, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.modularity, 0.0);
    }

    #[test]
    fn single_clique_is_one_community() {
        let mut g = WeightedGraph::new();
        clique(&mut g, 0..6);
        let c = louvain(&g);
        assert_eq!(c.community_count(), 1);
    }

    #[test]
    fn two_bridged_cliques() {
        let mut g = WeightedGraph::new();
        clique(&mut g, 0..10);
        clique(&mut g, 10..20);
        g.add_edge(9, 10, 1.0);
        let c = louvain(&g);
        assert_eq!(c.community_count(), 2);
        for i in 0..20 {
            assert_eq!(c.community[i], usize::from(i >= 10));
        }
        assert!(c.history.windows(2).all(|w| w[1] >= w[0]));
        assert!((c.modularity - modularity(&g, &c.community)).abs() < 1e-12);
    }

    #[test]
    fn modularity_of_known_partition() {
        // two disjoint edges, each its own community: Q = 2 * (2/4 - (2/4)^2) = 0.5
        let mut g: WeightedGraph<f64> = WeightedGraph::new();
        g.add_edge(0, 1, 1.0);
        g.add_edge(2, 3, 1.0);
        assert!((modularity(&g, &[0, 0, 1, 1]) - 0.5).abs() < 1e-15);
        assert!((louvain(&g).modularity - 0.5).abs() < 1e-15);
    }
}
