use std::collections::{BTreeMap, BTreeSet};

use ndarray::{ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::dbscan::ClusterAssignment;
use super::nmf::{dominant_component, nmf, shift_nonnegative, NmfConfig};
use super::outliers::{knn_graph, OutlierReport};
use crate::error::Result;
use crate::features::jaccard;
use crate::graphs::louvain;
use crate::scalar::{total_cmp, Scalar};

/// How outlier candidates are grouped among themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MicroMethod {
    /// Louvain communities of the k-nearest-neighbour similarity graph.
    KnnLouvain { k: usize },
    /// Dominant component of a second factorization of the candidates.
    Nmf { rank: usize },
}

impl Default for MicroMethod {
    fn default() -> Self {
        MicroMethod::KnnLouvain { k: 5 }
    }
}

/// Groups the candidate rows of `x`. Returns a dense group id per candidate
/// user.
pub fn micro_clusters<T: Scalar>(
    x: ArrayView2<T>,
    ids: &[u64],
    candidates: &[usize],
    method: MicroMethod,
    seed: u64,
) -> Result<BTreeMap<u64, usize>> {
    let m = candidates.len();
    let sub = x.select(Axis(0), candidates);
    let sub_ids: Vec<u64> = candidates.iter().map(|&i| ids[i]).collect();
    if m < 2 {
        return Ok(sub_ids.into_iter().map(|u| (u, 0)).collect());
    }
    let groups = match method {
        MicroMethod::KnnLouvain { k } => {
            let g = knn_graph(sub.view(), &sub_ids, k.clamp(1, m - 1))?;
            louvain(&g).community
        }
        MicroMethod::Nmf { rank } => {
            let (shifted, _) = shift_nonnegative(sub.view());
            let cfg = NmfConfig { rank: rank.clamp(1, m.min(sub.ncols())), seed, ..NmfConfig::default() };
            dominant_component(&nmf(shifted.view(), &cfg)?.w)
        }
    };
    Ok(sub_ids.into_iter().zip(groups).collect())
}

/// Merges candidate groups with the density clusters of everyone else.
/// Candidate groups keep their ids; density cluster `c` becomes
/// `c + group count`. Noise rows outside the candidate set stay unassigned.
pub fn cluster_map<T>(ids: &[u64], clusters: &ClusterAssignment<T>, micro: &BTreeMap<u64, usize>) -> BTreeMap<u64, usize> {
    let offset = micro.values().max().map_or(0, |m| m + 1);
    let mut out = micro.clone();
    for (i, &u) in ids.iter().enumerate() {
        if !out.contains_key(&u) {
            if let Some(c) = clusters.labels[i] {
                out.insert(u, c + offset);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuspectWeights {
    pub cluster: f64,
    pub outlier: f64,
    pub jaccard: f64,
}

impl Default for SuspectWeights {
    fn default() -> Self {
        Self { cluster: 0.4, outlier: 0.3, jaccard: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suspect {
    pub user_id: u64,
    pub score: f64,
    pub cluster_fraction: f64,
    pub outlier: f64,
    pub jaccard: f64,
}

/// Features at least one standard deviation from the mean, with direction.
pub fn feature_profile<T: Scalar>(z: ArrayView1<T>) -> BTreeSet<(usize, bool)> {
    z.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() >= T::one())
        .map(|(j, v)| (j, *v > T::zero()))
        .collect()
}

/// Composite suspicion ranking.
///
/// Each user scores `w_c·(confirmed-bot share of its cluster) +
/// w_o·(outlier score / max outlier score) + w_j·(best feature-profile
/// Jaccard against a confirmed bot other than itself)`. Users in `excluded`
/// are dropped; order is by descending score, ties by ascending id.
pub fn rank_suspects<T: Scalar>(
    z: ArrayView2<T>,
    ids: &[u64],
    clusters: &BTreeMap<u64, usize>,
    outliers: &OutlierReport<T>,
    known_bots: &BTreeSet<u64>,
    excluded: &BTreeSet<u64>,
    weights: SuspectWeights,
) -> Vec<Suspect> {
    let mut size: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (u, &c) in clusters {
        let e = size.entry(c).or_default();
        e.0 += 1;
        e.1 += usize::from(known_bots.contains(u));
    }
    let max_out = outliers.scores.iter().copied().fold(T::zero(), T::max).to_f64_lossy();
    let row_of: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let bot_profiles: Vec<(u64, BTreeSet<(usize, bool)>)> = known_bots
        .iter()
        .filter_map(|b| row_of.get(b).map(|&i| (*b, feature_profile(z.row(i)))))
        // an unremarkable bot says nothing about who resembles it
        .filter(|(_, p)| !p.is_empty())
        .collect();

    let mut out: Vec<Suspect> = ids
        .iter()
        .enumerate()
        .filter(|(_, u)| !excluded.contains(u))
        .map(|(i, &u)| {
            let cluster_fraction = clusters.get(&u).map_or(0.0, |c| size[c].1 as f64 / size[c].0 as f64);
            let outlier = if max_out > 0.0 { outliers.scores[i].to_f64_lossy() / max_out } else { 0.0 };
            let own = feature_profile(z.row(i));
            let jac = bot_profiles.iter().filter(|(b, _)| *b != u).map(|(_, p)| jaccard(&own, p)).fold(0.0, f64::max);
            Suspect {
                user_id: u,
                score: weights.cluster * cluster_fraction + weights.outlier * outlier + weights.jaccard * jac,
                cluster_fraction,
                outlier,
                jaccard: jac,
            }
        })
        .collect();
    out.sort_by(|a, b| total_cmp(b.score, a.score).then(a.user_id.cmp(&b.user_id)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    fn report(scores: Vec<f64>, ids: &[u64]) -> OutlierReport<f64> {
        let mut ranking: Vec<(u64, f64)> = ids.iter().copied().zip(scores.iter().copied()).collect();
        ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        OutlierReport { scores, ranking }
    }

    #[test]
    fn no_known_bots_follows_outlier_order() {
        let ids = [1, 2, 3, 4];
        let z = Array2::<f64>::zeros((4, 3));
        let r = report(vec![0.5, 2.0, 1.0, 2.0], &ids);
        let ranked = rank_suspects(z.view(), &ids, &BTreeMap::new(), &r, &BTreeSet::new(), &BTreeSet::new(), SuspectWeights::default());
        assert_eq!(ranked.iter().map(|s| s.user_id).collect::<Vec<_>>(), vec![2, 4, 3, 1]);
    }

    #[test]
    fn bot_clusters_rank_first_and_exclusions_apply() {
        let ids = [1, 2, 3, 4, 5];
        let z = Array2::<f64>::zeros((5, 2));
        let clusters: BTreeMap<u64, usize> = [(1, 0), (2, 0), (3, 1), (4, 1), (5, 1)].into();
        let r = report(vec![1.0; 5], &ids);
        let bots: BTreeSet<u64> = [1].into();
        let ranked = rank_suspects(z.view(), &ids, &clusters, &r, &bots, &[3].into(), SuspectWeights::default());
        assert_eq!(ranked.iter().map(|s| s.user_id).collect::<Vec<_>>(), vec![1, 2, 4, 5]);
        assert!((ranked[1].cluster_fraction - 0.5).abs() < 1e-12);
    }

    #[test]
    fn profile_jaccard_excludes_self() {
        let ids = [1, 2, 3];
        let z = array![[2.0, -1.5, 0.0], [2.0, -1.0, 0.0], [0.0, 0.0, 3.0]];
        let r = report(vec![0.0; 3], &ids);
        let ranked = rank_suspects(z.view(), &ids, &BTreeMap::new(), &r, &[1].into(), &BTreeSet::new(), SuspectWeights::default());
        let by_id: BTreeMap<u64, &Suspect> = ranked.iter().map(|s| (s.user_id, s)).collect();
        assert_eq!(by_id[&2].jaccard, 1.0);
        assert_eq!(by_id[&1].jaccard, 0.0);
        assert_eq!(by_id[&3].jaccard, 0.0);
    }

    #[test]
    fn micro_groups_and_merged_map() {
        let x = array![[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [9.0, 9.0], [9.1, 9.0], [9.0, 9.1], [4.0, 4.0]];
        let ids: Vec<u64> = (10..17).collect();
        let micro = micro_clusters(x.view(), &ids, &[0, 1, 2, 3, 4, 5], MicroMethod::KnnLouvain { k: 2 }, 0).unwrap();
        assert_eq!(micro[&10], micro[&12]);
        assert_ne!(micro[&10], micro[&13]);
        let nm = micro_clusters(x.view(), &ids, &[0, 1, 2, 3, 4, 5], MicroMethod::Nmf { rank: 2 }, 0).unwrap();
        assert_eq!(nm.len(), 6);

        let dense = ClusterAssignment { labels: vec![None, None, None, None, None, None, Some(0)], eps: 1.0, min_pts: 1 };
        let map = cluster_map(&ids, &dense, &micro);
        assert_eq!(map[&16], 2);
    }
}
