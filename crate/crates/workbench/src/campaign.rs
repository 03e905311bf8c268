//! The automated three-step hunt.
//!
//! Step one has the analyst inspect the top heuristic suspects. Step two
//! alternates composite suspect ranking with analyst review until enough
//! bots and humans are confirmed to train on. Step three trains the
//! classifier and lets the hedge guesser submit guesses directly to the
//! oracle, retraining after every verdict. Every analyst-confirmed bot is
//! also submitted as a guess.
//!
//! The simulated analyst answers from the ground truth and flips each answer
//! with probability `noise`. The challenge clock advances whenever the daily
//! review or guess quota is used up.

use std::collections::BTreeSet;

use bothunt_core::learn::{hedge_init, hedge_select, hedge_update};
use bothunt_core::oracle::Ledger;
use bothunt_core::Scoreboard;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::CampaignConfig;
use crate::error::{WorkbenchError, WorkbenchResult};
use crate::labels::{Label, Provenance};
use crate::session::{Session, Stage, ARM_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessRecord {
    pub user_id: u64,
    pub day: u32,
    pub correct: bool,
    pub step: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub step1_reviewed: usize,
    pub step1_confirmed: usize,
    pub step2_rounds: usize,
    pub step2_reviewed: usize,
    pub step2_confirmed: usize,
    pub step3_guesses: usize,
    pub step3_hits: usize,
    pub trainings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub guesses: Vec<GuessRecord>,
    pub ledger: Ledger,
    pub scoreboard: Scoreboard,
    pub steps: StepCounts,
    /// Final normalized arm weights of the guesser.
    pub arm_weights: Vec<(String, f64)>,
    pub final_day: u32,
}

struct Run<'a> {
    session: &'a mut Session,
    cfg: CampaignConfig,
    truth: BTreeSet<u64>,
    rng: ChaCha8Rng,
    guesses: Vec<GuessRecord>,
    steps: StepCounts,
    reviews_today: usize,
    guesses_today: usize,
}

impl Run<'_> {
    fn finished(&self) -> bool {
        let c = self.session.challenge().expect("oracle checked at start");
        self.guesses.len() >= self.cfg.budget || c.all_found_day().is_some() || c.is_over()
    }

    fn tick(&mut self) -> WorkbenchResult<()> {
        if self.reviews_today >= self.cfg.reviews_per_day || self.guesses_today >= self.cfg.guesses_per_day {
            self.reviews_today = 0;
            self.guesses_today = 0;
            if !self.session.challenge().expect("oracle").is_over() {
                self.session.advance_day()?;
            }
        }
        Ok(())
    }

    fn day(&self) -> u32 {
        self.session.challenge().map_or(0, |c| c.current_day())
    }

    fn guess(&mut self, user: u64, step: u8) -> WorkbenchResult<bool> {
        let day = self.day();
        let (outcome, _) = self.session.guess(user)?;
        self.guesses.push(GuessRecord { user_id: user, day, correct: outcome.correct, step });
        self.guesses_today += 1;
        self.tick()?;
        Ok(outcome.correct)
    }

    /// Analyst inspection; a bot verdict is submitted to the oracle.
    fn review(&mut self, user: u64, step: u8) -> WorkbenchResult<bool> {
        let flip = self.rng.random_bool(self.cfg.noise);
        let says_bot = self.truth.contains(&user) != flip;
        let ts = self.session.dataset().day_cutoff(self.day());
        let label = if says_bot { Label::Bot } else { Label::Human };
        self.session.set_label_at(user, label, vec!["simulated analyst".into()], Provenance::Analyst, ts)?;
        self.reviews_today += 1;
        let confirmed = says_bot && self.guess(user, step)?;
        if !says_bot {
            self.tick()?;
        }
        Ok(confirmed)
    }

    fn labelled(&self) -> (usize, usize) {
        (self.session.labels.known_bots().len(), self.session.labels.known_humans().len())
    }

    fn ready_to_train(&self) -> bool {
        let (b, h) = self.labelled();
        b >= self.cfg.train_min_bots && h >= self.cfg.train_min_humans
    }

    fn step_one(&mut self) -> WorkbenchResult<()> {
        let list = self.session.initial_suspects(self.cfg.initial_review)?;
        for s in list {
            if self.finished() {
                break;
            }
            self.steps.step1_reviewed += 1;
            self.steps.step1_confirmed += usize::from(self.review(s.user_id, 1)?);
        }
        Ok(())
    }

    fn step_two(&mut self) -> WorkbenchResult<()> {
        while !self.finished() && !self.ready_to_train() {
            self.steps.step2_rounds += 1;
            let ranked = self.session.suspects(&self.session.labels.decided())?;
            if ranked.is_empty() {
                break;
            }
            let (bots, _) = self.labelled();
            let batch: Vec<u64> = if bots < self.cfg.train_min_bots {
                ranked.iter().take(self.cfg.review_batch).map(|s| s.user_id).collect()
            } else {
                // enough bots: spot-check accounts from the unsuspicious half
                let mut low: Vec<u64> = ranked[ranked.len() / 2..].iter().map(|s| s.user_id).collect();
                low.shuffle(&mut self.rng);
                low.truncate(self.cfg.review_batch);
                low
            };
            for u in batch {
                if self.finished() {
                    break;
                }
                self.steps.step2_reviewed += 1;
                self.steps.step2_confirmed += usize::from(self.review(u, 2)?);
            }
        }
        Ok(())
    }

    fn step_three(&mut self) -> WorkbenchResult<()> {
        if self.finished() {
            return Ok(());
        }
        if self.session.hedge.is_none() {
            self.session.hedge = Some(hedge_init(&ARM_NAMES)?);
        }
        while !self.finished() {
            self.session.run_stage(Stage::Train)?;
            self.steps.trainings += 1;
            let guessed: BTreeSet<u64> = self.guesses.iter().map(|g| g.user_id).collect();
            let mut excluded = self.session.labels.decided();
            excluded.extend(&guessed);
            let ranked = self.session.suspects(&excluded)?;
            let pool: Vec<u64> = ranked.iter().take(self.cfg.hedge_pool).map(|s| s.user_id).collect();
            if pool.is_empty() {
                break;
            }
            let table = self.session.arm_scores(&pool, &ranked)?;
            let hedge = self.session.hedge.as_ref().expect("initialized above");
            let pick = hedge_select(hedge, &pool, &table)?;
            let correct = self.guess(pick, 3)?;
            let x = if correct { self.cfg.hit_feedback } else { self.cfg.miss_feedback };
            let updated = hedge_update(self.session.hedge.as_ref().expect("initialized"), pick, x, &table[&pick])?;
            self.session.hedge = Some(updated);
            self.steps.step3_guesses += 1;
            self.steps.step3_hits += usize::from(correct);
        }
        self.session.run_stage(Stage::Hedge)?;
        Ok(())
    }
}

/// Runs the full hunt against the attached oracle with the simulated analyst.
pub fn campaign_auto(session: &mut Session, cfg: &CampaignConfig) -> WorkbenchResult<CampaignReport> {
    cfg.validate()?;
    if session.challenge().is_none() {
        return Err(WorkbenchError::NoOracle);
    }
    if !cfg.auto_analyst {
        return Err(WorkbenchError::NoAnalyst);
    }
    let truth = session.truth().ok_or(WorkbenchError::NoOracle)?.bot_ids.clone();
    session.ensure_stage(Stage::Outliers)?;

    let mut run = Run {
        session,
        cfg: cfg.clone(),
        truth,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        guesses: Vec::new(),
        steps: StepCounts::default(),
        reviews_today: 0,
        guesses_today: 0,
    };
    run.step_one()?;
    run.step_two()?;
    if run.ready_to_train() {
        run.step_three()?;
    }

    let Run { session, guesses, steps, .. } = run;
    let challenge = session.challenge().expect("checked above");
    let arm_weights = session
        .hedge()
        .map(|h| h.arms.iter().cloned().zip(h.normalized()).collect())
        .unwrap_or_default();
    Ok(CampaignReport {
        guesses,
        ledger: challenge.ledger(),
        scoreboard: challenge.scoreboard(),
        steps,
        arm_weights,
        final_day: challenge.current_day(),
    })
}
