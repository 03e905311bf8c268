use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Bot,
    Human,
    Unknown,
}

impl std::str::FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bot" => Ok(Label::Bot),
            "human" => Ok(Label::Human),
            "unknown" => Ok(Label::Unknown),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Analyst,
    Oracle,
    Classifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub user_id: u64,
    pub label: Label,
    #[serde(default)]
    pub flags: Vec<String>,
    pub provenance: Provenance,
    /// Position in the store's history; later records supersede earlier ones.
    pub sequence: u64,
    /// Unix seconds when the record was made.
    pub timestamp: i64,
}

/// Append-only label history with a current view.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelStore {
    history: Vec<LabelRecord>,
    current: BTreeMap<u64, usize>,
}

impl LabelStore {
    pub fn record(&mut self, user_id: u64, label: Label, flags: Vec<String>, provenance: Provenance, timestamp: i64) -> LabelRecord {
        let rec = LabelRecord { user_id, label, flags, provenance, sequence: self.history.len() as u64, timestamp };
        self.current.insert(user_id, self.history.len());
        self.history.push(rec.clone());
        rec
    }

    pub fn get(&self, user_id: u64) -> Option<&LabelRecord> {
        self.current.get(&user_id).map(|&i| &self.history[i])
    }

    pub fn label_of(&self, user_id: u64) -> Label {
        self.get(user_id).map_or(Label::Unknown, |r| r.label)
    }

    pub fn history(&self) -> &[LabelRecord] {
        &self.history
    }

    pub fn with_label(&self, label: Label) -> BTreeSet<u64> {
        self.current.iter().filter(|(_, &i)| self.history[i].label == label).map(|(&u, _)| u).collect()
    }

    pub fn known_bots(&self) -> BTreeSet<u64> {
        self.with_label(Label::Bot)
    }

    pub fn known_humans(&self) -> BTreeSet<u64> {
        self.with_label(Label::Human)
    }

    /// Users holding a bot or human verdict.
    pub fn decided(&self) -> BTreeSet<u64> {
        self.current.iter().filter(|(_, &i)| self.history[i].label != Label::Unknown).map(|(&u, _)| u).collect()
    }

    /// Current `(user, label)` pairs; the input that training depends on.
    pub fn current_pairs(&self) -> Vec<(u64, Label)> {
        self.current.iter().map(|(&u, &i)| (u, self.history[i].label)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn later_records_supersede() {
        let mut s = LabelStore::default();
        s.record(1, Label::Bot, vec![], Provenance::Analyst, 0);
        s.record(2, Label::Bot, vec!["stock image".into()], Provenance::Analyst, 0);
        assert_eq!(s.known_bots().len(), 2);
        s.record(1, Label::Human, vec![], Provenance::Oracle, 5);
        assert_eq!(s.known_bots(), [2].into());
        assert_eq!(s.known_humans(), [1].into());
        assert_eq!(s.history().len(), 3);
        assert_eq!(s.get(1).unwrap().sequence, 2);
        assert_eq!(s.label_of(9), Label::Unknown);
    }

    #[test]
    fn labels_parse() {
        assert_eq!("bot".parse::<Label>().unwrap(), Label::Bot);
        assert!("robot".parse::<Label>().is_err());
    }
}
