//! The scoring server: ground truth, guess ledger, day clock and scores.
//!
//! A hit earns one point and a miss costs a quarter. A team that has found
//! every bot by day `d` of an `n`-day challenge earns `n − d` speed points.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::GroundTruth;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub user_id: u64,
    pub day: u32,
    pub correct: bool,
}

/// Everything needed to recompute a scoreboard offline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub duration_days: u32,
    pub bot_count: usize,
    pub entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scoreboard<T = f64> {
    pub hits: usize,
    pub misses: usize,
    pub guesses: usize,
    pub accuracy: T,
    pub speed: u32,
    pub final_score: T,
    pub all_found_day: Option<u32>,
}

impl<T: Scalar> Scoreboard<T> {
    /// Scores from raw counts: accuracy `h − m/4`, final `accuracy + speed`.
    pub fn from_counts(hits: usize, misses: usize, speed: u32) -> Self {
        let accuracy = T::of_usize(hits) - T::of_usize(misses) / T::of(4.0);
        Self {
            hits,
            misses,
            guesses: hits + misses,
            accuracy,
            speed,
            final_score: accuracy + T::of(speed as f64),
            all_found_day: None,
        }
    }
}

/// Recomputes the scoreboard from a ledger alone.
pub fn replay<T: Scalar>(ledger: &Ledger) -> Scoreboard<T> {
    let mut hits = 0;
    let mut all_found_day = None;
    for e in &ledger.entries {
        if e.correct {
            hits += 1;
            if hits == ledger.bot_count && all_found_day.is_none() {
                all_found_day = Some(e.day);
            }
        }
    }
    let misses = ledger.entries.len() - hits;
    let speed = all_found_day.map_or(0, |d| ledger.duration_days.saturating_sub(d));
    Scoreboard { all_found_day, ..Scoreboard::from_counts(hits, misses, speed) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessOutcome {
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengeState {
    bots: BTreeSet<u64>,
    duration_days: u32,
    current_day: u32,
    ledger: Vec<LedgerEntry>,
    guessed: BTreeSet<u64>,
    hits: usize,
    all_found_day: Option<u32>,
}

pub fn create_challenge(truth: &GroundTruth, duration_days: u32) -> Result<ChallengeState> {
    ChallengeState::new(truth.bot_ids.iter().copied(), duration_days)
}

impl ChallengeState {
    pub fn new(bots: impl IntoIterator<Item = u64>, duration_days: u32) -> Result<Self> {
        let bots: BTreeSet<u64> = bots.into_iter().collect();
        if bots.is_empty() {
            return Err(Error::EmptyGroundTruth);
        }
        if duration_days == 0 {
            return Err(Error::ZeroDuration);
        }
        Ok(Self {
            bots,
            duration_days,
            current_day: 0,
            ledger: Vec::new(),
            guessed: BTreeSet::new(),
            hits: 0,
            all_found_day: None,
        })
    }

    pub fn duration_days(&self) -> u32 {
        self.duration_days
    }

    pub fn current_day(&self) -> u32 {
        self.current_day
    }

    pub fn all_found_day(&self) -> Option<u32> {
        self.all_found_day
    }

    pub fn bot_count(&self) -> usize {
        self.bots.len()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.ledger
    }

    pub fn already_guessed(&self, user_id: u64) -> bool {
        self.guessed.contains(&user_id)
    }

    pub fn is_over(&self) -> bool {
        self.current_day >= self.duration_days
    }

    /// Right/wrong for one guess. Ids outside the ground truth, including
    /// ids that are not accounts at all, are misses.
    pub fn submit_guess(&mut self, user_id: u64) -> Result<GuessOutcome> {
        if self.is_over() {
            return Err(Error::ChallengeOver(self.current_day));
        }
        if !self.guessed.insert(user_id) {
            return Err(Error::RepeatGuess(user_id));
        }
        let correct = self.bots.contains(&user_id);
        self.ledger.push(LedgerEntry { user_id, day: self.current_day, correct });
        if correct {
            self.hits += 1;
            if self.hits == self.bots.len() {
                self.all_found_day = Some(self.current_day);
            }
        }
        Ok(GuessOutcome { correct })
    }

    pub fn advance_day(&mut self) -> Result<u32> {
        if self.is_over() {
            return Err(Error::ChallengeOver(self.current_day));
        }
        self.current_day += 1;
        Ok(self.current_day)
    }

    pub fn scoreboard<T: Scalar>(&self) -> Scoreboard<T> {
        let misses = self.ledger.len() - self.hits;
        let speed = self.all_found_day.map_or(0, |d| self.duration_days - d);
        Scoreboard { all_found_day: self.all_found_day, ..Scoreboard::from_counts(self.hits, misses, speed) }
    }

    pub fn ledger(&self) -> Ledger {
        Ledger { duration_days: self.duration_days, bot_count: self.bots.len(), entries: self.ledger.clone() }
    }
}
