//! Unsupervised structure discovery over the feature matrix.
//!
//! The usual chain is [`nmf`] on the shifted z-scores, [`dbscan`] on the
//! factor rows with [`estimate_eps`], [`outlier_scores`] against the cluster
//! centroids, then [`micro_clusters`] over the outlier candidates and
//! [`rank_suspects`] once some bots are confirmed. [`run_detection`] wires
//! the first four together.

mod dbscan;
mod nmf;
mod outliers;
mod suspects;

use std::collections::BTreeMap;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

pub use dbscan::{dbscan, ClusterAssignment};
pub use nmf::{dominant_component, frobenius_sq, nmf, shift_nonnegative, Embedding, NmfConfig};
pub use outliers::{estimate_eps, knn_graph, outlier_candidates, outlier_scores, OutlierReport};
pub use suspects::{cluster_map, feature_profile, micro_clusters, rank_suspects, MicroMethod, Suspect, SuspectWeights};

use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectConfig {
    pub nmf_rank: usize,
    pub nmf_max_iter: usize,
    pub nmf_tol: f64,
    pub ortho_lambda: f64,
    /// `None` picks eps from the k-distance distribution with `k = min_pts`.
    pub eps: Option<f64>,
    pub min_pts: usize,
    /// Clusters smaller than this share of all rows count as outliers.
    pub minor_cluster_fraction: f64,
    pub micro: MicroMethod,
    pub seed: u64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            nmf_rank: 8,
            nmf_max_iter: 500,
            nmf_tol: 1e-6,
            ortho_lambda: 0.0,
            eps: None,
            min_pts: 5,
            minor_cluster_fraction: 0.05,
            micro: MicroMethod::default(),
            seed: 7,
        }
    }
}

/// Artifacts of one pass of the unsupervised chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection<T> {
    pub embedding: Embedding<T>,
    pub clusters: ClusterAssignment<T>,
    pub outliers: OutlierReport<T>,
    /// Row indices of the outlier candidates.
    pub candidates: Vec<usize>,
    /// Candidate groups merged with the density clusters, by user id.
    pub cluster_map: BTreeMap<u64, usize>,
}

impl<T: Scalar> Detection<T> {
    pub fn candidate_ids(&self, ids: &[u64]) -> Vec<u64> {
        self.candidates.iter().map(|&i| ids[i]).collect()
    }
}

/// Density clustering of the factor rows. Used by [`run_detection`] and by
/// callers that already hold an embedding.
pub fn cluster_embedding<T: Scalar>(w: ArrayView2<T>, cfg: &DetectConfig) -> Result<ClusterAssignment<T>> {
    let eps = match cfg.eps {
        Some(e) => T::of(e),
        None => estimate_eps(w, cfg.min_pts.max(1))?,
    };
    Ok(dbscan(w, eps, cfg.min_pts))
}

/// Factorizes the shifted z-scores and clusters the factor rows.
pub fn embed_and_cluster<T: Scalar>(z: ArrayView2<T>, cfg: &DetectConfig) -> Result<(Embedding<T>, ClusterAssignment<T>)> {
    let (shifted, _): (Array2<T>, _) = shift_nonnegative(z);
    let ncfg = NmfConfig {
        rank: cfg.nmf_rank.min(z.nrows()).min(z.ncols()).max(1),
        max_iter: cfg.nmf_max_iter,
        tol: T::of(cfg.nmf_tol),
        ortho_lambda: T::of(cfg.ortho_lambda),
        seed: cfg.seed,
        restarts: 1,
    };
    let embedding = nmf(shifted.view(), &ncfg)?;
    let clusters = cluster_embedding(embedding.w.view(), cfg)?;
    Ok((embedding, clusters))
}

/// Outlier scores, candidates and micro-groups on top of a clustering.
pub fn finish_detection<T: Scalar>(
    embedding: Embedding<T>,
    clusters: ClusterAssignment<T>,
    ids: &[u64],
    cfg: &DetectConfig,
) -> Result<Detection<T>> {
    let outliers = outlier_scores(embedding.w.view(), ids, &clusters);
    let candidates = outlier_candidates(&clusters, cfg.minor_cluster_fraction);
    let micro = micro_clusters(embedding.w.view(), ids, &candidates, cfg.micro, cfg.seed)?;
    let cluster_map = cluster_map(ids, &clusters, &micro);
    Ok(Detection { embedding, clusters, outliers, candidates, cluster_map })
}

pub fn run_detection<T: Scalar>(z: ArrayView2<T>, ids: &[u64], cfg: &DetectConfig) -> Result<Detection<T>> {
    let (embedding, clusters) = embed_and_cluster(z, cfg)?;
    finish_detection(embedding, clusters, ids, cfg)
}
