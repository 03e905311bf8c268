use std::collections::BTreeSet;

use ndarray::{Array1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::dbscan::{euclidean, ClusterAssignment};
use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::scalar::{total_cmp, Scalar};

/// Sorted distances from row `i` to every other row, paired with the other
/// row's id; ties by ascending id.
fn neighbours<T: Scalar>(x: ArrayView2<T>, ids: &[u64], i: usize) -> Vec<(T, u64, usize)> {
    let p = x.row(i);
    let mut v: Vec<(T, u64, usize)> =
        (0..x.nrows()).filter(|&j| j != i).map(|j| (euclidean(p, x.row(j)), ids[j], j)).collect();
    v.sort_by(|a, b| total_cmp(a.0, b.0).then(a.1.cmp(&b.1)));
    v
}

/// Linear-interpolation percentile of an ascending slice, `q ∈ [0, 1]`.
pub(crate) fn percentile<T: Scalar>(sorted: &[T], q: f64) -> T {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = T::of(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// 90th percentile of the k-th nearest neighbour distances.
pub fn estimate_eps<T: Scalar>(x: ArrayView2<T>, k: usize) -> Result<T> {
    let n = x.nrows();
    if k == 0 || n <= k {
        return Err(Error::TooFewPoints { n, k });
    }
    let ids: Vec<u64> = (0..n as u64).collect();
    let mut kth: Vec<T> = (0..n).map(|i| neighbours(x, &ids, i)[k - 1].0).collect();
    kth.sort_by(|a, b| total_cmp(*a, *b));
    Ok(percentile(&kth, 0.9))
}

/// Undirected union of every row's `k` nearest neighbours. Nodes are `ids`
/// in row order; edge weight is `1 / (1 + distance)`.
pub fn knn_graph<T: Scalar>(x: ArrayView2<T>, ids: &[u64], k: usize) -> Result<WeightedGraph<T>> {
    let n = x.nrows();
    if n != ids.len() {
        return Err(Error::LengthMismatch { expected: n, got: ids.len() });
    }
    if k >= n {
        return Err(Error::TooFewPoints { n, k });
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut g = WeightedGraph::with_nodes(ids.iter().copied());
    for i in 0..n {
        for &(d, _, j) in neighbours(x, ids, i).iter().take(k) {
            if pairs.insert((i.min(j), i.max(j))) {
                g.add_edge_idx(i, j, T::one() / (T::one() + d));
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport<T> {
    /// Score per row, aligned with the ids passed in.
    pub scores: Vec<T>,
    /// `(user id, score)` by descending score, ties by ascending id.
    pub ranking: Vec<(u64, T)>,
}

impl<T: Scalar> OutlierReport<T> {
    pub fn max_score(&self) -> T {
        self.ranking.first().map_or(T::zero(), |r| r.1)
    }
}

/// Distance from each row to the nearest cluster centroid; with no clusters
/// at all, distance to the centroid of every row.
pub fn outlier_scores<T: Scalar>(x: ArrayView2<T>, ids: &[u64], clusters: &ClusterAssignment<T>) -> OutlierReport<T> {
    let k = clusters.cluster_count();
    let d = x.ncols();
    let centroids: Vec<Array1<T>> = if k == 0 {
        if x.nrows() == 0 {
            vec![]
        } else {
            vec![x.mean_axis(Axis(0)).unwrap_or_else(|| Array1::zeros(d))]
        }
    } else {
        let mut sums = vec![Array1::<T>::zeros(d); k];
        let mut counts = vec![0usize; k];
        for (i, lab) in clusters.labels.iter().enumerate() {
            if let Some(c) = *lab {
                sums[c] = &sums[c] + &x.row(i);
                counts[c] += 1;
            }
        }
        sums.into_iter().zip(counts).map(|(s, c)| s / T::of_usize(c)).collect()
    };
    let scores: Vec<T> = (0..x.nrows())
        .map(|i| centroids.iter().map(|c| euclidean(x.row(i), c.view())).fold(T::infinity(), T::min))
        .map(|s| if s.is_finite() { s } else { T::zero() })
        .collect();
    let mut ranking: Vec<(u64, T)> = ids.iter().copied().zip(scores.iter().copied()).collect();
    ranking.sort_by(|a, b| total_cmp(b.1, a.1).then(a.0.cmp(&b.0)));
    OutlierReport { scores, ranking }
}

/// Rows outside the main structure: noise plus members of clusters holding
/// less than `minor_fraction` of all rows.
pub fn outlier_candidates<T>(clusters: &ClusterAssignment<T>, minor_fraction: f64) -> Vec<usize> {
    let n = clusters.labels.len();
    let sizes = clusters.sizes();
    let limit = minor_fraction * n as f64;
    (0..n)
        .filter(|&i| match clusters.labels[i] {
            None => true,
            Some(c) => (sizes[c] as f64) < limit,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::dbscan;
    use ndarray::{array, Array2};

    #[test]
    fn unit_line_eps_is_one() {
        let x = Array2::from_shape_fn((10, 1), |(i, _)| i as f64);
        assert_eq!(estimate_eps(x.view(), 1).unwrap(), 1.0);
    }

    #[test]
    fn two_scale_percentile_by_hand() {
        // six points spaced 1 apart, then four spaced 10 apart
        let pos = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 15.0, 25.0, 35.0, 45.0];
        let x = Array2::from_shape_fn((10, 1), |(i, _)| pos[i]);
        // 1-NN distances sorted: 1,1,1,1,1,1,10,10,10,10; position 8.1 → 10
        assert_eq!(estimate_eps(x.view(), 1).unwrap(), 10.0);
        // 2-NN: 0→2, 1..4→1, 5→2, 15→10, 25→10, 35→10, 45→20
        // sorted 1,1,1,1,2,2,10,10,10,20; position 8.1 → 10 + 0.1·10 = 11
        assert!((estimate_eps::<f64>(x.view(), 2).unwrap() - 11.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let x = Array2::<f64>::zeros((3, 2));
        assert!(matches!(estimate_eps(x.view(), 3), Err(Error::TooFewPoints { .. })));
        assert!(matches!(knn_graph(x.view(), &[1, 2, 3], 3), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn collinear_knn() {
        let x = array![[0.0], [1.0], [3.0]];
        let g = knn_graph(x.view(), &[10, 11, 12], 1).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(&10, &11), Some(0.5));
        assert_eq!(g.weight(&11, &12), Some(1.0 / 3.0));
        assert_eq!(g.weight(&10, &12), None);
    }

    #[test]
    fn identical_points_and_complete_graph() {
        let x = Array2::<f64>::zeros((4, 2));
        let g = knn_graph(x.view(), &[1, 2, 3, 4], 3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.edges().all(|(_, _, w)| w == 1.0));
    }

    #[test]
    fn far_noise_point_ranks_first() {
        let x = array![[0.0, 0.0], [0.2, 0.0], [0.0, 0.2], [5.0, 5.0], [5.2, 5.0], [5.0, 5.2], [0.1, 0.1], [30.0, 0.0]];
        let ids: Vec<u64> = (1..=8).collect();
        let c = dbscan(x.view(), 0.5, 3);
        let r = outlier_scores(x.view(), &ids, &c);
        assert_eq!(r.ranking[0].0, 8);
        // blob centroids are (0.075, 0.075) and (15.2/3, 15.2/3); the second is nearer
        let c2 = 15.2f64 / 3.0;
        let expected = ((30.0 - c2).powi(2) + c2 * c2).sqrt();
        assert!((r.ranking[0].1 - expected).abs() < 1e-12);
    }

    #[test]
    fn point_at_centroid_scores_zero() {
        let x = array![[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [0.0, 0.0]];
        let c = dbscan(x.view(), 3.0, 2);
        let r = outlier_scores(x.view(), &[1, 2, 3, 4, 5], &c);
        assert_eq!(r.scores[4], 0.0);
    }

    #[test]
    fn no_clusters_uses_global_centroid() {
        let x = array![[0.0], [10.0], [20.0]];
        let c = dbscan(x.view(), 1.0, 2);
        assert_eq!(c.cluster_count(), 0);
        let r = outlier_scores(x.view(), &[1, 2, 3], &c);
        assert_eq!(r.scores, vec![10.0, 0.0, 10.0]);
        // tie between ids 1 and 3 broken by id
        assert_eq!(r.ranking.iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 3, 2]);
    }

    #[test]
    fn candidates_are_noise_and_minor_clusters() {
        let c = ClusterAssignment { labels: vec![Some(0); 18].into_iter().chain([Some(1), None]).collect(), eps: 1.0, min_pts: 1 };
        assert_eq!(outlier_candidates(&c, 0.1), vec![18, 19]);
    }
}
