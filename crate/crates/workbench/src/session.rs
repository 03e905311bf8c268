//! Analyst session: dataset, labels, the oracle, and cached pipeline stages.
//!
//! Stages run on demand and cache their artifacts. Each artifact is hashed
//! with SHA-256 over a canonical text form, and when the session has a
//! directory it is written there under that hash. Changing a label marks
//! `train` and `hedge` stale and refreshes the label-dependent feature
//! columns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use bothunt_core::corpus::{follower_series, Dataset, GroundTruth, Tweet, UserAccount};
use bothunt_core::detect::{embed_and_cluster, finish_detection, rank_suspects, Suspect};
use bothunt_core::features::{assemble_matrix, FeatureContext, FeatureMatrix, LabelContext, SentimentLexicon};
use bothunt_core::learn::{hedge_init, hedge_to_text, predict_prob, score_table, train_linear, Arm};
use bothunt_core::oracle::{create_challenge, ChallengeState, GuessOutcome};
use bothunt_core::{ClusterAssignment, Detection, Embedding, HedgeState, LinearModel, Scoreboard};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::WorkbenchConfig;
use crate::error::{WorkbenchError, WorkbenchResult};
use crate::graphs::{summarize, GraphKind, GraphSummary};
use crate::labels::{Label, LabelRecord, LabelStore, Provenance};

pub const MAX_EXPLANATION: usize = 10;

pub const ARM_NAMES: [&str; 5] = ["linear_model", "outlier", "cluster_bot_fraction", "jaccard_to_known_bots", "regular_cadence"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Features,
    Graphs,
    Cluster,
    Outliers,
    Train,
    Hedge,
}

impl Stage {
    pub const ALL: [Stage; 6] = [Stage::Features, Stage::Graphs, Stage::Cluster, Stage::Outliers, Stage::Train, Stage::Hedge];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Features => "features",
            Stage::Graphs => "graphs",
            Stage::Cluster => "cluster",
            Stage::Outliers => "outliers",
            Stage::Train => "train",
            Stage::Hedge => "hedge",
        }
    }

    pub fn dependencies(self) -> &'static [Stage] {
        match self {
            Stage::Features => &[],
            Stage::Graphs | Stage::Cluster | Stage::Train => &[Stage::Features],
            Stage::Outliers => &[Stage::Cluster],
            Stage::Hedge => &[Stage::Outliers, Stage::Train],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = WorkbenchError;
    fn from_str(s: &str) -> WorkbenchResult<Self> {
        Stage::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| WorkbenchError::UnknownStage(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub millis: u128,
    /// Hex SHA-256 of the stage artifact.
    pub artifact: String,
    pub summary: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageStatus {
    pub stage: Stage,
    pub done: bool,
    pub stale: bool,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialSuspect {
    pub user_id: u64,
    pub score: f64,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationEntry {
    pub feature: String,
    pub raw: f64,
    pub z: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub user_id: u64,
    pub entries: Vec<ExplanationEntry>,
    pub score: f64,
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// One analyst workspace over one dataset.
pub struct Session {
    dataset: Dataset,
    truth: Option<GroundTruth>,
    challenge: Option<ChallengeState>,
    pub(crate) config: WorkbenchConfig,
    lexicon: SentimentLexicon,
    pub(crate) labels: LabelStore,
    context: Option<FeatureContext>,
    series: BTreeMap<u64, Vec<usize>>,
    matrix: Option<FeatureMatrix>,
    graphs: Vec<GraphSummary>,
    clustering: Option<(Embedding, ClusterAssignment)>,
    detection: Option<Detection>,
    model: Option<LinearModel>,
    pub(crate) hedge: Option<HedgeState>,
    artifacts: BTreeMap<Stage, String>,
    stale: BTreeSet<Stage>,
    dir: Option<PathBuf>,
}

impl Session {
    pub fn new(dataset: Dataset, config: WorkbenchConfig) -> Self {
        Self {
            dataset,
            truth: None,
            challenge: None,
            config,
            lexicon: SentimentLexicon::default(),
            labels: LabelStore::default(),
            context: None,
            series: BTreeMap::new(),
            matrix: None,
            graphs: Vec::new(),
            clustering: None,
            detection: None,
            model: None,
            hedge: None,
            artifacts: BTreeMap::new(),
            stale: BTreeSet::new(),
            dir: None,
        }
    }

    pub fn with_lexicon(mut self, lexicon: SentimentLexicon) -> Self {
        self.lexicon = lexicon;
        self
    }

    /// Persist artifacts under `dir`, named by their hash.
    pub fn with_dir(mut self, dir: impl Into<PathBuf>) -> WorkbenchResult<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        self.dir = Some(dir);
        Ok(self)
    }

    /// Connects a scoring oracle holding `truth` for the dataset's duration.
    pub fn attach_oracle(&mut self, truth: GroundTruth) -> WorkbenchResult<()> {
        self.challenge = Some(create_challenge(&truth, self.dataset.duration_days)?);
        self.truth = Some(truth);
        Ok(())
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn config(&self) -> &WorkbenchConfig {
        &self.config
    }

    pub fn labels(&self) -> &LabelStore {
        &self.labels
    }

    pub fn matrix(&self) -> Option<&FeatureMatrix> {
        self.matrix.as_ref()
    }

    pub fn detection(&self) -> Option<&Detection> {
        self.detection.as_ref()
    }

    pub fn model(&self) -> Option<&LinearModel> {
        self.model.as_ref()
    }

    pub fn hedge(&self) -> Option<&HedgeState> {
        self.hedge.as_ref()
    }

    pub fn challenge(&self) -> Option<&ChallengeState> {
        self.challenge.as_ref()
    }

    pub(crate) fn challenge_mut(&mut self) -> WorkbenchResult<&mut ChallengeState> {
        self.challenge.as_mut().ok_or(WorkbenchError::NoOracle)
    }

    pub(crate) fn truth(&self) -> Option<&GroundTruth> {
        self.truth.as_ref()
    }

    pub fn graphs(&self) -> &[GraphSummary] {
        &self.graphs
    }

    pub fn series(&self, user: u64) -> Option<&[usize]> {
        self.series.get(&user).map(Vec::as_slice)
    }

    pub fn account(&self, user: u64) -> WorkbenchResult<&UserAccount> {
        self.dataset.account(user).ok_or(WorkbenchError::Core(bothunt_core::Error::UnknownUser(user)))
    }

    /// The user's tweets in time order, at most `limit`.
    pub fn tweet_sample(&self, user: u64, limit: usize) -> Vec<&Tweet> {
        let mut v: Vec<&Tweet> = self.dataset.tweets.iter().filter(|t| t.user_id == user).collect();
        v.sort_by_key(|t| (t.timestamp, t.tweet_id));
        v.truncate(limit);
        v
    }

    pub fn is_done(&self, stage: Stage) -> bool {
        self.artifacts.contains_key(&stage)
    }

    pub fn artifact(&self, stage: Stage) -> Option<&str> {
        self.artifacts.get(&stage).map(String::as_str)
    }

    pub fn status(&self) -> Vec<StageStatus> {
        Stage::ALL
            .into_iter()
            .map(|s| StageStatus { stage: s, done: self.is_done(s), stale: self.stale.contains(&s), artifact: self.artifacts.get(&s).cloned() })
            .collect()
    }

    pub fn scoreboard(&self) -> WorkbenchResult<Scoreboard> {
        Ok(self.challenge.as_ref().ok_or(WorkbenchError::NoOracle)?.scoreboard())
    }

    fn require(&self, stage: Stage) -> WorkbenchResult<()> {
        for &dep in stage.dependencies() {
            if !self.is_done(dep) {
                return Err(WorkbenchError::Dependency { stage, missing: dep });
            }
        }
        Ok(())
    }

    fn require_features(&self, stage: Stage) -> WorkbenchResult<&FeatureMatrix> {
        self.matrix.as_ref().ok_or(WorkbenchError::Dependency { stage, missing: Stage::Features })
    }

    fn commit(&mut self, stage: Stage, bytes: &[u8], started: Instant, summary: serde_json::Value) -> WorkbenchResult<StageReport> {
        let artifact = sha256_hex(bytes);
        if let Some(dir) = &self.dir {
            std::fs::write(dir.join(&artifact), bytes)?;
            let index: BTreeMap<&str, &String> = self.artifacts.iter().map(|(s, h)| (s.name(), h)).chain([(stage.name(), &artifact)]).collect();
            std::fs::write(dir.join("stages.json"), serde_json::to_vec_pretty(&index)?)?;
            std::fs::write(dir.join("labels.json"), serde_json::to_vec_pretty(self.labels.history())?)?;
        }
        self.artifacts.insert(stage, artifact.clone());
        self.stale.remove(&stage);
        Ok(StageReport { stage, millis: started.elapsed().as_millis(), artifact, summary })
    }

    fn label_context(&self) -> LabelContext {
        LabelContext { known_bots: self.labels.known_bots(), clusters: self.detection.as_ref().map(|d| d.cluster_map.clone()) }
    }

    /// Recomputes the label-dependent columns under the current labels.
    fn refresh_matrix(&mut self) {
        if let Some(ctx) = &self.context {
            self.matrix = Some(assemble_matrix(ctx, &self.label_context()));
        }
    }

    pub fn run_stage(&mut self, stage: Stage) -> WorkbenchResult<StageReport> {
        self.require(stage)?;
        let started = Instant::now();
        match stage {
            Stage::Features => {
                let ctx = FeatureContext::new(&self.dataset, &self.lexicon, &self.config.features)?;
                let step = self.config.features.series_step_days.max(1) as usize;
                let days: Vec<u32> = (0..=self.dataset.duration_days).step_by(step).collect();
                self.series = follower_series(&self.dataset, &days)?;
                self.context = Some(ctx);
                self.refresh_matrix();
                let m = self.matrix.as_ref().expect("context was just set");
                let mut csv = Vec::new();
                m.write_csv(&mut csv)?;
                let summary = serde_json::json!({ "rows": m.n_rows(), "columns": m.names.len() });
                self.commit(stage, &csv, started, summary)
            }
            Stage::Graphs => {
                self.graphs = [GraphKind::Hashtag, GraphKind::Retweet, GraphKind::Mention]
                    .into_iter()
                    .map(|k| summarize(&self.dataset, k))
                    .collect::<WorkbenchResult<_>>()?;
                let bytes = serde_json::to_vec(&self.graphs)?;
                let summary = serde_json::to_value(&self.graphs)?;
                self.commit(stage, &bytes, started, summary)
            }
            Stage::Cluster => {
                let m = self.require_features(stage)?;
                let (embedding, clusters) = embed_and_cluster(m.label_free_z().view(), &self.config.detect)?;
                let bytes = serde_json::to_vec(&(&clusters, &embedding.w))?;
                let summary = serde_json::json!({
                    "clusters": clusters.cluster_count(),
                    "sizes": clusters.sizes(),
                    "noise": clusters.noise().len(),
                    "eps": clusters.eps,
                    "nmf_iterations": embedding.iterations,
                });
                self.clustering = Some((embedding, clusters));
                self.detection = None;
                self.artifacts.remove(&Stage::Outliers);
                self.commit(stage, &bytes, started, summary)
            }
            Stage::Outliers => {
                let (embedding, clusters) = self.clustering.clone().expect("cluster stage done");
                let ids = self.require_features(stage)?.user_ids.clone();
                let det = finish_detection(embedding, clusters, &ids, &self.config.detect)?;
                let bytes = serde_json::to_vec(&(&det.outliers, &det.candidates, &det.cluster_map))?;
                let summary = serde_json::json!({
                    "candidates": det.candidates.len(),
                    "groups": det.cluster_map.values().collect::<BTreeSet<_>>().len(),
                    "top": det.outliers.ranking.iter().take(10).collect::<Vec<_>>(),
                });
                self.detection = Some(det);
                self.refresh_matrix();
                self.commit(stage, &bytes, started, summary)
            }
            Stage::Train => {
                self.refresh_matrix();
                let m = self.matrix.as_ref().expect("features stage done");
                let bots = self.labels.known_bots();
                let humans = self.labels.known_humans();
                let rows: Vec<usize> = bots.iter().chain(&humans).filter_map(|u| m.row_of(*u)).collect();
                let y: Vec<i8> = rows.iter().map(|&i| if bots.contains(&m.user_ids[i]) { 1 } else { -1 }).collect();
                let x = m.z.select(ndarray::Axis(0), &rows);
                let model = train_linear(x.view(), &y, &m.names, &self.config.classifier)?;
                let text = model.to_text();
                let summary = serde_json::json!({ "bots": bots.len(), "humans": humans.len() });
                self.model = Some(model);
                self.commit(stage, text.as_bytes(), started, summary)
            }
            Stage::Hedge => {
                if self.hedge.is_none() {
                    self.hedge = Some(hedge_init(&ARM_NAMES)?);
                }
                let h = self.hedge.as_ref().expect("just initialized");
                let text = hedge_to_text(h)?;
                let summary = serde_json::json!({ "arms": h.arms, "weights": h.normalized(), "guesses": h.history.len() });
                self.commit(stage, text.as_bytes(), started, summary)
            }
        }
    }

    /// Runs `stage` after any of its dependencies that have not run yet.
    pub fn ensure_stage(&mut self, stage: Stage) -> WorkbenchResult<()> {
        for &dep in stage.dependencies() {
            if !self.is_done(dep) {
                self.ensure_stage(dep)?;
            }
        }
        if !self.is_done(stage) || self.stale.contains(&stage) {
            self.run_stage(stage)?;
        }
        Ok(())
    }

    pub fn set_label(&mut self, user_id: u64, label: Label, flags: Vec<String>, provenance: Provenance) -> WorkbenchResult<LabelRecord> {
        let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs() as i64);
        self.set_label_at(user_id, label, flags, provenance, now)
    }

    pub fn set_label_at(&mut self, user_id: u64, label: Label, flags: Vec<String>, provenance: Provenance, timestamp: i64) -> WorkbenchResult<LabelRecord> {
        self.account(user_id)?;
        let before = self.labels.label_of(user_id);
        let rec = self.labels.record(user_id, label, flags, provenance, timestamp);
        for s in [Stage::Train, Stage::Hedge] {
            if self.is_done(s) {
                self.stale.insert(s);
            }
        }
        if (before == Label::Bot) != (label == Label::Bot) {
            self.refresh_matrix();
        }
        Ok(rec)
    }

    /// Submits a guess to the oracle and records its verdict as a label.
    pub fn guess(&mut self, user_id: u64) -> WorkbenchResult<(GuessOutcome, Scoreboard)> {
        let challenge = self.challenge_mut()?;
        let outcome = challenge.submit_guess(user_id)?;
        let board = challenge.scoreboard();
        if self.dataset.account(user_id).is_some() {
            let day = self.challenge.as_ref().map_or(0, |c| c.current_day());
            let ts = self.dataset.day_cutoff(day);
            let label = if outcome.correct { Label::Bot } else { Label::Human };
            self.set_label_at(user_id, label, vec![], Provenance::Oracle, ts)?;
        }
        Ok((outcome, board))
    }

    pub fn advance_day(&mut self) -> WorkbenchResult<u32> {
        Ok(self.challenge_mut()?.advance_day()?)
    }

    fn raw_or_zero(m: &FeatureMatrix, row: usize, name: &str) -> f64 {
        m.column_of(name).filter(|&j| !m.missing[[row, j]]).map_or(0.0, |j| m.raw[[row, j]])
    }

    /// Step-one heuristic ranking with the cues that fired for each user.
    pub fn initial_suspects(&self, k: usize) -> WorkbenchResult<Vec<InitialSuspect>> {
        let m = self.require_features(Stage::Features)?;
        let session_col = "longest_session_hours_5min";
        let max_session = (0..m.n_rows()).map(|i| Self::raw_or_zero(m, i, session_col)).fold(0.0, f64::max);
        let mut out: Vec<InitialSuspect> = (0..m.n_rows())
            .map(|i| {
                let session = if max_session > 0.0 { Self::raw_or_zero(m, i, session_col) / max_session } else { 0.0 };
                let cues = [
                    ("auto-generated name", Self::raw_or_zero(m, i, "name_autogen_score")),
                    ("cloned profile image", Self::raw_or_zero(m, i, "image_clone_flag")),
                    ("cloned profile url", Self::raw_or_zero(m, i, "url_clone_flag")),
                    ("repetitive tweet openings", Self::raw_or_zero(m, i, "eliza_score")),
                    ("unbroken tweeting sessions", session),
                ];
                InitialSuspect {
                    user_id: m.user_ids[i],
                    score: cues.iter().map(|c| c.1).sum(),
                    reasons: cues.iter().filter(|c| c.1 >= 0.5).map(|c| c.0.to_string()).collect(),
                }
            })
            .collect();
        out.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.user_id.cmp(&b.user_id)));
        out.truncate(k);
        Ok(out)
    }

    /// Composite suspect ranking under the current labels. Users in
    /// `excluded` are left out.
    pub fn suspects(&self, excluded: &BTreeSet<u64>) -> WorkbenchResult<Vec<Suspect>> {
        let det = self.detection.as_ref().ok_or(WorkbenchError::Dependency { stage: Stage::Hedge, missing: Stage::Outliers })?;
        let m = self.require_features(Stage::Outliers)?;
        Ok(rank_suspects(m.z.view(), &m.user_ids, &det.cluster_map, &det.outliers, &self.labels.known_bots(), excluded, self.config.suspects))
    }

    /// Per-arm scores for `users`, in [`ARM_NAMES`] order.
    pub fn arm_scores(&self, users: &[u64], suspects: &[Suspect]) -> WorkbenchResult<BTreeMap<u64, Vec<f64>>> {
        let m = self.require_features(Stage::Hedge)?;
        let model = self.model.as_ref().ok_or(WorkbenchError::Dependency { stage: Stage::Hedge, missing: Stage::Train })?;
        let by_user: BTreeMap<u64, &Suspect> = suspects.iter().map(|s| (s.user_id, s)).collect();
        let entropy = m.column_of("inter_tweet_entropy_bits").expect("entropy column");
        let jac = m.column_of("jaccard_to_known_bots").expect("jaccard column");
        let max_entropy = (0..m.n_rows()).filter(|&i| !m.missing[[i, entropy]]).map(|i| m.raw[[i, entropy]]).fold(0.0, f64::max);
        let row = |u: u64| m.row_of(u);
        let arms = [
            Arm::new(ARM_NAMES[0], |u| row(u).and_then(|i| predict_prob(model, m.z.row(i)).ok()).unwrap_or(0.0)),
            Arm::new(ARM_NAMES[1], |u| by_user.get(&u).map_or(0.0, |s| s.outlier)),
            Arm::new(ARM_NAMES[2], |u| by_user.get(&u).map_or(0.0, |s| s.cluster_fraction)),
            Arm::new(ARM_NAMES[3], |u| row(u).map_or(0.0, |i| m.raw[[i, jac]])),
            Arm::new(ARM_NAMES[4], |u| match row(u) {
                Some(i) if !m.missing[[i, entropy]] && max_entropy > 0.0 => 1.0 - m.raw[[i, entropy]] / max_entropy,
                _ => 0.0,
            }),
        ];
        Ok(score_table(&arms, users))
    }

    /// The features behind a user's suspicion, largest contribution first.
    pub fn explain_user(&self, user_id: u64, k: usize) -> WorkbenchResult<Explanation> {
        self.account(user_id)?;
        let m = self.require_features(Stage::Features)?;
        let i = m.row_of(user_id).ok_or(WorkbenchError::Core(bothunt_core::Error::UnknownUser(user_id)))?;
        let z = m.z.row(i);
        let contributions: Vec<f64> = match &self.model {
            Some(model) if model.weights.len() == z.len() => model.contributions(z)?.to_vec(),
            _ => z.iter().map(|v| v.abs()).collect(),
        };
        let mut order: Vec<usize> = (0..m.names.len()).collect();
        order.sort_by(|&a, &b| contributions[b].abs().total_cmp(&contributions[a].abs()).then(a.cmp(&b)));
        let entries = order
            .into_iter()
            .take(k.min(MAX_EXPLANATION))
            .map(|j| ExplanationEntry { feature: m.names[j].clone(), raw: m.raw[[i, j]], z: m.z[[i, j]], contribution: contributions[j] })
            .collect();
        let score = match (&self.model, &self.detection) {
            (Some(model), _) if model.weights.len() == z.len() => predict_prob(model, z)?,
            (_, Some(_)) => self.suspects(&BTreeSet::new())?.into_iter().find(|s| s.user_id == user_id).map_or(0.0, |s| s.score),
            _ => self.initial_suspects(usize::MAX)?.into_iter().find(|s| s.user_id == user_id).map_or(0.0, |s| s.score),
        };
        Ok(Explanation { user_id, entries, score })
    }
}
