use std::path::Path;

use bothunt_core::detect::{DetectConfig, SuspectWeights};
use bothunt_core::features::FeatureParams;
use bothunt_core::learn::LinearConfig;
use serde::{Deserialize, Serialize};

use crate::error::{WorkbenchError, WorkbenchResult};

/// Settings for the automated three-step campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    /// Maximum number of oracle guesses.
    pub budget: usize,
    /// Answer review requests from the ground truth instead of waiting for a
    /// human analyst.
    pub auto_analyst: bool,
    /// Probability that the simulated analyst flips an answer.
    pub noise: f64,
    /// Accounts the analyst inspects from the heuristic list.
    pub initial_review: usize,
    /// Accounts the analyst inspects per round of suspect ranking.
    pub review_batch: usize,
    /// Confirmed bots needed before the classifier and guesser take over.
    pub train_min_bots: usize,
    pub train_min_humans: usize,
    /// Size of the suspect pool the guesser chooses from.
    pub hedge_pool: usize,
    pub hit_feedback: f64,
    pub miss_feedback: f64,
    /// Oracle guesses per challenge day before the clock advances.
    pub guesses_per_day: usize,
    /// Analyst inspections per challenge day before the clock advances.
    pub reviews_per_day: usize,
    pub seed: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            budget: 120,
            auto_analyst: true,
            noise: 0.0,
            initial_review: 10,
            review_batch: 10,
            train_min_bots: 10,
            train_min_humans: 30,
            hedge_pool: 100,
            hit_feedback: 1.0,
            miss_feedback: -1.0,
            guesses_per_day: 4,
            reviews_per_day: 10,
            seed: 42,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> WorkbenchResult<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(WorkbenchError::Config(format!("noise {} is outside [0, 1]", self.noise)));
        }
        if self.budget == 0 {
            return Err(WorkbenchError::Config("budget must be positive".into()));
        }
        if self.guesses_per_day == 0 || self.reviews_per_day == 0 {
            return Err(WorkbenchError::Config("daily quotas must be positive".into()));
        }
        Ok(())
    }
}

/// The whole workbench configuration, stored as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct WorkbenchConfig {
    pub campaign: CampaignConfig,
    pub features: FeatureParams,
    pub detect: DetectConfig,
    pub suspects: SuspectWeights,
    pub classifier: LinearConfig,
}

impl WorkbenchConfig {
    pub fn load(path: impl AsRef<Path>) -> WorkbenchResult<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> WorkbenchResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| WorkbenchError::Config(e.to_string()))?;
        cfg.campaign.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always representable as TOML")
    }
}
