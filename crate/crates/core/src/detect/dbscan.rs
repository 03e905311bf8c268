use std::collections::VecDeque;

use ndarray::{ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub(crate) fn euclidean<T: Scalar>(a: ArrayView1<T>, b: ArrayView1<T>) -> T {
    a.iter().zip(b.iter()).map(|(x, y)| (*x - *y) * (*x - *y)).sum::<T>().sqrt()
}

/// Cluster of each row, `None` for noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment<T> {
    pub labels: Vec<Option<usize>>,
    pub eps: T,
    pub min_pts: usize,
}

impl<T> ClusterAssignment<T> {
    pub fn cluster_count(&self) -> usize {
        self.labels.iter().flatten().max().map_or(0, |m| m + 1)
    }

    pub fn noise(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i].is_none()).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.cluster_count()];
        for c in self.labels.iter().flatten() {
            s[*c] += 1;
        }
        s
    }
}

fn region<T: Scalar>(x: ArrayView2<T>, i: usize, eps: T) -> Vec<usize> {
    let p = x.row(i);
    (0..x.nrows()).filter(|&j| euclidean(p, x.row(j)) <= eps).collect()
}

/// Density-based clustering. A point is core when at least `min_pts` rows,
/// itself included, lie within `eps`. Rows are scanned in order and a border
/// point keeps the first cluster that reaches it.
pub fn dbscan<T: Scalar>(x: ArrayView2<T>, eps: T, min_pts: usize) -> ClusterAssignment<T> {
    let n = x.nrows();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut next = 0;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let seeds = region(x, i, eps);
        if seeds.len() < min_pts {
            continue;
        }
        let c = next;
        next += 1;
        labels[i] = Some(c);
        let mut queue: VecDeque<usize> = seeds.into_iter().collect();
        while let Some(q) = queue.pop_front() {
            if labels[q].is_none() {
                labels[q] = Some(c);
            }
            if visited[q] {
                continue;
            }
            visited[q] = true;
            let nq = region(x, q, eps);
            if nq.len() >= min_pts {
                queue.extend(nq.into_iter().filter(|&j| !visited[j] || labels[j].is_none()));
            }
        }
    }
    ClusterAssignment { labels, eps, min_pts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn two_blobs_and_a_stray() {
        let x = array![[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [5.0, 5.0], [5.1, 5.0], [5.0, 5.1], [20.0, -20.0]];
        let c = dbscan(x.view(), 0.5, 3);
        assert_eq!(c.cluster_count(), 2);
        assert_eq!(c.noise(), vec![6]);
        assert_eq!(c.labels[..3], [Some(0); 3]);
        assert_eq!(c.labels[3..6], [Some(1); 3]);
    }

    #[test]
    fn identical_points_form_one_cluster() {
        let x = Array2::<f64>::ones((8, 3));
        let c = dbscan(x.view(), 0.1, 8);
        assert_eq!(c.labels, vec![Some(0); 8]);
    }

    #[test]
    fn empty_input() {
        let x = Array2::<f64>::zeros((0, 2));
        assert!(dbscan(x.view(), 1.0, 2).labels.is_empty());
    }

    #[test]
    fn border_point_goes_to_first_cluster() {
        // 1.9 is a border point reachable from core 0.9 and core 2.9
        let x = array![[0.0], [0.3], [0.6], [0.9], [1.9], [2.9], [3.2], [3.5], [3.8]];
        let c = dbscan(x.view(), 1.0, 4);
        let a = Some(0);
        let b = Some(1);
        assert_eq!(c.labels, vec![a, a, a, a, a, b, b, b, b]);
    }
}
