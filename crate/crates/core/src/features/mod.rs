//! Per-user feature extraction.
//!
//! Six extractors (syntax, templated-opening score, semantics, temporal,
//! profile, network) each emit a fixed, named slice of the canonical vector;
//! [`FeatureContext`] precomputes the corpus-wide structures they share and
//! [`assemble_matrix`] builds the z-scored matrix.

mod lexicon;
mod matrix;
mod network;
mod profile;
mod semantic;
mod syntax;
mod temporal;

pub use lexicon::{score_sentiment, SentimentLexicon, NEGATION_WINDOW};
pub use matrix::{assemble_matrix, FeatureContext, FeatureMatrix, FeatureParams, LabelContext};
pub use network::{network_features, NetworkContext};
pub use profile::{jaccard, name_autogen_score, normalize_url, profile_features, profile_tokens, ProfileContext};
pub use semantic::{semantic_features, TopicSet};
pub use syntax::{eliza_score, syntax_features};
pub use temporal::{entropy_bits, gap_bin, temporal_features, TemporalParams, GAP_BINS};

pub const SYNTAX_FEATURES: [&str; 9] = [
    "avg_hashtags",
    "avg_mentions",
    "avg_links",
    "avg_special_chars",
    "retweet_fraction",
    "geo_fraction",
    "end_punct_fraction",
    "end_hashtag_fraction",
    "end_link_fraction",
];

pub const ELIZA_FEATURES: [&str; 1] = ["eliza_score"];

pub const SEMANTIC_FEATURES: [&str; 7] = [
    "topic_tweet_count",
    "avg_topic_sentiment",
    "pos_strength",
    "neg_strength",
    "contradiction_rank",
    "language_count",
    "sentiment_inconsistency",
];

pub const TEMPORAL_FEATURES: [&str; 11] = [
    "inter_tweet_entropy_bits",
    "longest_session_hours_5min",
    "longest_session_hours_10min",
    "tweets_per_day",
    "flipflop_count",
    "sentiment_variance",
    "dropped_follower_pct",
    "snr",
    "series_min",
    "series_max",
    "series_entropy",
];

pub const PROFILE_FEATURES: [&str; 7] = [
    "profile_completeness",
    "name_autogen_score",
    "url_clone_flag",
    "image_clone_flag",
    "follower_ratio",
    "source_count",
    "jaccard_to_known_bots",
];

pub const NETWORK_FEATURES: [&str; 11] = [
    "in_degree",
    "out_degree",
    "pagerank_retweet",
    "pagerank_mention",
    "betweenness_retweet",
    "betweenness_mention",
    "clustering_coeff_retweet",
    "clustering_coeff_mention",
    "known_bots_followed",
    "cluster_bot_fraction",
    "sentiment_deviation_from_neighbors",
];

pub const FEATURE_COUNT: usize = 46;

/// Columns whose values depend on the confirmed-bot labels.
pub const LABEL_FEATURES: [&str; 3] = ["jaccard_to_known_bots", "known_bots_followed", "cluster_bot_fraction"];

/// Canonical column order.
pub fn feature_names() -> Vec<&'static str> {
    let mut v = Vec::with_capacity(FEATURE_COUNT);
    v.extend(SYNTAX_FEATURES);
    v.extend(ELIZA_FEATURES);
    v.extend(SEMANTIC_FEATURES);
    v.extend(TEMPORAL_FEATURES);
    v.extend(PROFILE_FEATURES);
    v.extend(NETWORK_FEATURES);
    v
}

pub fn feature_index(name: &str) -> Option<usize> {
    feature_names().iter().position(|n| *n == name)
}

/// Values emitted by one extractor, in its canonical order. A missing value
/// is stored as 0 with its mask bit set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureValues {
    entries: Vec<(&'static str, f64, bool)>,
}

impl FeatureValues {
    pub fn push(&mut self, name: &'static str, value: f64) {
        self.entries.push((name, value, false));
    }

    pub fn push_missing(&mut self, name: &'static str) {
        self.entries.push((name, 0.0, true));
    }

    pub fn push_opt(&mut self, name: &'static str, value: Option<f64>) {
        match value {
            Some(v) => self.push(name, v),
            None => self.push_missing(name),
        }
    }

    /// Overwrites an existing entry and clears its mask bit.
    pub fn set(&mut self, name: &str, value: f64) {
        if let Some(e) = self.entries.iter_mut().find(|e| e.0 == name) {
            e.1 = value;
            e.2 = false;
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == name).map(|e| e.1)
    }

    pub fn is_missing(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.0 == name && e.2)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    pub fn mask(&self) -> impl Iterator<Item = bool> + '_ {
        self.entries.iter().map(|e| e.2)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One user's full canonical vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub user_id: u64,
    pub values: Vec<f64>,
    pub missing: Vec<bool>,
}

impl FeatureVector {
    pub fn from_parts(user_id: u64, parts: &[&FeatureValues]) -> Self {
        let mut values = Vec::with_capacity(FEATURE_COUNT);
        let mut missing = Vec::with_capacity(FEATURE_COUNT);
        for p in parts {
            values.extend(p.values());
            missing.extend(p.mask());
        }
        debug_assert_eq!(values.len(), FEATURE_COUNT);
        Self { user_id, values, missing }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn canonical_names_are_unique() {
        let names = feature_names();
        assert_eq!(names.len(), FEATURE_COUNT);
        assert_eq!(names.iter().collect::<BTreeSet<_>>().len(), FEATURE_COUNT);
        assert_eq!(feature_index("eliza_score"), Some(9));
    }
}
