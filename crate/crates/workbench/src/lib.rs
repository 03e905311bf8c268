//! Analyst workbench for influence-bot hunting.
//!
//! A [`Session`] owns one dataset, the analyst's labels, an optional scoring
//! oracle and the cached pipeline stages. [`campaign_auto`] drives the whole
//! hunt with a simulated analyst, [`api::router`] exposes the session over
//! HTTP, and the `bothunt` binary wraps both for the command line.

pub mod api;
pub mod campaign;
pub mod config;
pub mod error;
pub mod graphs;
pub mod labels;
pub mod session;

pub use campaign::{campaign_auto, CampaignReport, GuessRecord, StepCounts};
pub use config::{CampaignConfig, WorkbenchConfig};
pub use error::{WorkbenchError, WorkbenchResult};
pub use labels::{Label, LabelRecord, LabelStore, Provenance};
pub use session::{Explanation, ExplanationEntry, InitialSuspect, Session, Stage, StageReport};
