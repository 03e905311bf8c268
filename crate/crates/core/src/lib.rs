//! Influence-bot hunting toolkit.
//!
//! [`corpus`] holds the data model and a synthetic challenge generator,
//! [`features`] turns accounts into feature rows, [`graphs`] and [`detect`]
//! provide the unsupervised structure discovery, [`learn`] the supervised
//! classifier and hedge guesser, and [`oracle`] the scoring server.
//!
//! The numeric kernels are generic over [`Scalar`]; the aliases below fix
//! them to `f64`, with `*32` variants where single precision is useful.

pub mod corpus;
pub mod detect;
pub mod features;
pub mod error;
pub mod graphs;
pub mod learn;
pub mod oracle;
pub mod scalar;
pub mod text;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Embedding = detect::Embedding<f64>;
pub type Embedding32 = detect::Embedding<f32>;
pub type NmfConfig = detect::NmfConfig<f64>;
pub type NmfConfig32 = detect::NmfConfig<f32>;
pub type ClusterAssignment = detect::ClusterAssignment<f64>;
pub type ClusterAssignment32 = detect::ClusterAssignment<f32>;
pub type OutlierReport = detect::OutlierReport<f64>;
pub type Detection = detect::Detection<f64>;
pub type WeightedGraph = graphs::WeightedGraph<f64>;
pub type WeightedGraph32 = graphs::WeightedGraph<f32>;
pub type DiGraph = graphs::DiGraph<f64>;
pub type DiGraph32 = graphs::DiGraph<f32>;
pub type PageRank = graphs::PageRank<f64>;
pub type CommunityAssignment = graphs::CommunityAssignment<f64>;
pub type LinearModel = learn::LinearModel<f64>;
pub type LinearModel32 = learn::LinearModel<f32>;
pub type HedgeState = learn::HedgeState<f64>;
pub type HedgeState32 = learn::HedgeState<f32>;
pub type Scoreboard = oracle::Scoreboard<f64>;
