use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationClass {
    BadWeight,
    OutOfWindow,
    OrphanRetweetOf,
    OrphanAuthor,
    DuplicateUserId,
    DuplicateTweetId,
}

impl fmt::Display for ViolationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::BadWeight => "bad_weight",
            Self::OutOfWindow => "out_of_window",
            Self::OrphanRetweetOf => "orphan_retweet_of",
            Self::OrphanAuthor => "orphan_author",
            Self::DuplicateUserId => "duplicate_user_id",
            Self::DuplicateTweetId => "duplicate_tweet_id",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub class: ViolationClass,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn total(&self) -> usize {
        self.violations.len()
    }

    pub fn counts(&self) -> BTreeMap<ViolationClass, usize> {
        let mut m = BTreeMap::new();
        for v in &self.violations {
            *m.entry(v.class).or_insert(0) += 1;
        }
        m
    }

    fn push(&mut self, class: ViolationClass, detail: String) {
        self.violations.push(Violation { class, detail });
    }
}

/// Checks dataset invariants and reports every violation found.
pub fn validate_dataset(ds: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (start, end) = (ds.start_time, ds.end_time());

    let mut accounts = BTreeSet::new();
    for a in &ds.accounts {
        if !accounts.insert(a.user_id) {
            report.push(ViolationClass::DuplicateUserId, format!("user {}", a.user_id));
        }
    }
    let network_ids: BTreeSet<u64> = ds
        .network_events
        .iter()
        .flat_map(|e| [e.from_user, e.to_user])
        .collect();
    let known = |id: u64| accounts.contains(&id) || network_ids.contains(&id);

    for (i, ev) in ds.network_events.iter().enumerate() {
        if ev.weight > 1 {
            report.push(
                ViolationClass::BadWeight,
                format!("event {i} ({}->{}) has weight {}", ev.from_user, ev.to_user, ev.weight),
            );
        }
        if ev.timestamp < start || ev.timestamp > end {
            report.push(ViolationClass::OutOfWindow, format!("event {i} at {}", ev.timestamp));
        }
    }

    let mut tweet_ids = BTreeSet::new();
    for t in &ds.tweets {
        if !tweet_ids.insert(t.tweet_id) {
            report.push(ViolationClass::DuplicateTweetId, format!("tweet {}", t.tweet_id));
        }
        if t.timestamp < start || t.timestamp > end {
            report.push(ViolationClass::OutOfWindow, format!("tweet {} at {}", t.tweet_id, t.timestamp));
        }
        if !known(t.user_id) {
            report.push(ViolationClass::OrphanAuthor, format!("tweet {} by {}", t.tweet_id, t.user_id));
        }
        if let Some(src) = t.retweet_of {
            if !known(src) {
                report.push(ViolationClass::OrphanRetweetOf, format!("tweet {} retweets {src}", t.tweet_id));
            }
        }
    }
    report
}
