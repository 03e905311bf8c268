//! Multiplicative-weights guesser over a fixed set of scoring arms.
//!
//! Every arm maps a user to a score in `[0, 1]`. A user's bot score is the
//! weight-averaged arm score, the next guess is the best-scoring candidate,
//! and the oracle's feedback `x` multiplies arm `j`'s weight by
//! `exp(x · f_j)`. Weights are rescaled to sum to the arm count whenever one
//! exceeds `1e12`; the logarithm of every such divisor is accumulated in
//! `log_scale` so the unnormalized weights stay recoverable.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{total_cmp, Scalar};

pub const RENORMALIZE_ABOVE: f64 = 1e12;

/// A named scoring function over user ids.
pub struct Arm<'a, T> {
    pub id: String,
    score: Box<dyn Fn(u64) -> T + Send + Sync + 'a>,
}

impl<'a, T: Scalar> Arm<'a, T> {
    pub fn new(id: impl Into<String>, score: impl Fn(u64) -> T + Send + Sync + 'a) -> Self {
        Self { id: id.into(), score: Box::new(score) }
    }

    /// The arm's score, clamped into `[0, 1]`; NaN becomes 0.
    pub fn score(&self, user: u64) -> T {
        let s = (self.score)(user);
        if s.is_nan() {
            T::zero()
        } else {
            s.max(T::zero()).min(T::one())
        }
    }
}

/// Per-arm scores for each user, in arm order.
pub fn score_table<T: Scalar>(arms: &[Arm<'_, T>], users: &[u64]) -> BTreeMap<u64, Vec<T>> {
    users.iter().map(|&u| (u, arms.iter().map(|a| a.score(u)).collect())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HedgeStep<T> {
    pub user_id: u64,
    pub feedback: T,
    pub scores: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HedgeState<T> {
    pub arms: Vec<String>,
    pub weights: Vec<T>,
    /// Sum of the logs of every renormalization divisor.
    pub log_scale: T,
    pub history: Vec<HedgeStep<T>>,
}

impl<T: Scalar> HedgeState<T> {
    /// Weights relative to their sum.
    pub fn normalized(&self) -> Vec<T> {
        let s: T = self.weights.iter().copied().sum();
        self.weights.iter().map(|w| *w / s).collect()
    }

    /// `ln w_j` without the renormalization, i.e. `Σ_t x_t f_{j,t}`.
    pub fn log_weights(&self) -> Vec<T> {
        self.weights.iter().map(|w| w.ln() + self.log_scale).collect()
    }

    fn check(&self, f: &[T]) -> Result<()> {
        if f.len() != self.weights.len() {
            return Err(Error::LengthMismatch { expected: self.weights.len(), got: f.len() });
        }
        if let Some(bad) = f.iter().find(|v| !(**v >= T::zero() && **v <= T::one())) {
            return Err(Error::ScoreOutOfRange(bad.to_f64_lossy()));
        }
        Ok(())
    }
}

pub fn hedge_init<T: Scalar, S: AsRef<str>>(arms: &[S]) -> Result<HedgeState<T>> {
    if arms.is_empty() {
        return Err(Error::NoArms);
    }
    Ok(HedgeState {
        arms: arms.iter().map(|a| a.as_ref().to_string()).collect(),
        weights: vec![T::one(); arms.len()],
        log_scale: T::zero(),
        history: Vec::new(),
    })
}

/// `Σ w_j f_j / Σ w_j`.
pub fn hedge_bot_score<T: Scalar>(state: &HedgeState<T>, f: &[T]) -> Result<T> {
    state.check(f)?;
    let num: T = state.weights.iter().zip(f).map(|(w, v)| *w * *v).sum();
    let den: T = state.weights.iter().copied().sum();
    Ok(num / den)
}

/// Candidate with the highest bot score; ties go to the lower id.
pub fn hedge_select<T: Scalar>(state: &HedgeState<T>, candidates: &[u64], f_table: &BTreeMap<u64, Vec<T>>) -> Result<u64> {
    let mut best: Option<(u64, T)> = None;
    for &u in candidates {
        let f = f_table.get(&u).ok_or(Error::UnknownUser(u))?;
        let s = hedge_bot_score(state, f)?;
        let better = match best {
            None => true,
            Some((bu, bs)) => match total_cmp(s, bs) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => u < bu,
                std::cmp::Ordering::Less => false,
            },
        };
        if better {
            best = Some((u, s));
        }
    }
    best.map(|b| b.0).ok_or(Error::NoCandidates)
}

/// Applies `w_j ← w_j · exp(x · f_j)` and records the step.
pub fn hedge_update<T: Scalar>(state: &HedgeState<T>, user_id: u64, x: T, f: &[T]) -> Result<HedgeState<T>> {
    state.check(f)?;
    let mut next = state.clone();
    for (w, v) in next.weights.iter_mut().zip(f) {
        *w *= (x * *v).exp();
    }
    let max = next.weights.iter().copied().fold(T::zero(), T::max);
    if max > T::of(RENORMALIZE_ABOVE) {
        let c = next.weights.iter().copied().sum::<T>() / T::of_usize(next.weights.len());
        for w in &mut next.weights {
            *w /= c;
        }
        next.log_scale += c.ln();
    }
    next.history.push(HedgeStep { user_id, feedback: x, scores: f.to_vec() });
    Ok(next)
}

pub fn hedge_to_text<T: Serialize>(state: &HedgeState<T>) -> Result<String> {
    Ok(serde_json::to_string_pretty(state)?)
}

pub fn hedge_from_text<T: DeserializeOwned>(text: &str) -> Result<HedgeState<T>> {
    Ok(serde_json::from_str(text)?)
}
