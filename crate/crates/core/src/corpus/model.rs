use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAccount {
    pub user_id: u64,
    pub screen_name: String,
    pub display_name: String,
    #[serde(default)]
    pub bio: String,
    #[serde(default)]
    pub profile_image_ref: String,
    #[serde(default)]
    pub profile_url: String,
    pub followers_count: u64,
    pub followings_count: u64,
    pub created_at: i64,
    #[serde(default)]
    pub sources: Vec<String>,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: u64,
    pub user_id: u64,
    pub timestamp: i64,
    pub text: String,
    #[serde(default)]
    pub hashtags: Vec<String>,
    /// Mentioned screen names.
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default)]
    pub urls: Vec<String>,
    #[serde(default)]
    pub is_retweet: bool,
    #[serde(default)]
    pub retweet_of: Option<u64>,
    #[serde(default)]
    pub geo_enabled: bool,
    pub language: String,
    /// Text of the linked page, when the tweet carries a link.
    #[serde(default)]
    pub url_text: Option<String>,
}

/// One row of the follow log. `weight` is 1 for a follow and 0 for an
/// unfollow; any other value is a data error surfaced by validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkEvent {
    pub from_user: u64,
    pub to_user: u64,
    pub timestamp: i64,
    pub weight: u8,
}

/// Challenge corpus. Immutable once loaded or generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub accounts: Vec<UserAccount>,
    pub tweets: Vec<Tweet>,
    pub network_events: Vec<NetworkEvent>,
    pub duration_days: u32,
    /// Epoch seconds of day 0.
    pub start_time: i64,
    pub topic_keywords: Vec<String>,
}

impl Dataset {
    pub fn end_time(&self) -> i64 {
        self.start_time + i64::from(self.duration_days) * SECONDS_PER_DAY
    }

    pub fn day_cutoff(&self, day: u32) -> i64 {
        self.start_time + i64::from(day) * SECONDS_PER_DAY
    }

    pub fn account_ids(&self) -> BTreeSet<u64> {
        self.accounts.iter().map(|a| a.user_id).collect()
    }

    pub fn account(&self, id: u64) -> Option<&UserAccount> {
        self.accounts.iter().find(|a| a.user_id == id)
    }

    /// Tweets grouped by author, each group in timestamp order.
    pub fn tweets_by_user(&self) -> BTreeMap<u64, Vec<&Tweet>> {
        let mut map: BTreeMap<u64, Vec<&Tweet>> = BTreeMap::new();
        for t in &self.tweets {
            map.entry(t.user_id).or_default().push(t);
        }
        for v in map.values_mut() {
            v.sort_by_key(|t| (t.timestamp, t.tweet_id));
        }
        map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMix {
    pub amplifier: f64,
    pub infiltrator: f64,
    pub ring: f64,
}

impl Default for FamilyMix {
    fn default() -> Self {
        Self {
            amplifier: 0.4,
            infiltrator: 0.3,
            ring: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n_users: usize,
    pub n_bots: usize,
    pub family_mix: FamilyMix,
    pub duration_days: u32,
    /// Median tweets per day across human accounts.
    pub human_tweets_per_day: f64,
    /// Log-scale spread of per-human tweet rates.
    pub human_rate_sigma: f64,
    /// Day on which infiltrator bots switch from anti- to pro-topic content.
    pub flip_day: u32,
    /// Fraction of `n_users` emitted as ids that appear only in the follow log.
    pub network_only_fraction: f64,
    pub start_time: i64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_users: 1000,
            n_bots: 39,
            family_mix: FamilyMix::default(),
            duration_days: 28,
            human_tweets_per_day: 4.0,
            human_rate_sigma: 0.8,
            flip_day: 14,
            network_only_fraction: 0.05,
            // 2015-02-01T00:00:00Z
            start_time: 1_422_748_800,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub bot_ids: BTreeSet<u64>,
    pub family_of: BTreeMap<u64, String>,
    pub config: GeneratorConfig,
    pub seed: u64,
}
