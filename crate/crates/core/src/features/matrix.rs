use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use ndarray::Array2;

use super::network::{cluster_bot_fraction, network_values};
use super::semantic::topic_sentiments;
use super::{
    eliza_score, feature_names, profile_features, semantic_features, syntax_features, temporal_features,
    FeatureValues, FeatureVector, NetworkContext, ProfileContext, SentimentLexicon, TemporalParams, TopicSet,
    FEATURE_COUNT,
};
use crate::corpus::{follower_series, Dataset, NetworkEvent};
use crate::error::{Error, Result};

/// Below this a column counts as constant and is zeroed.
const MIN_STD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct FeatureParams {
    pub session_breaks: [i64; 2],
    /// Co-occurrence weight a tag needs to join the topic set.
    pub topic_min_weight: f64,
    /// Spacing of the follower-count checkpoints, in days.
    pub series_step_days: u32,
}

impl Default for FeatureParams {
    fn default() -> Self {
        Self { session_breaks: [300, 600], topic_min_weight: 5.0, series_step_days: 7 }
    }
}

/// Labels that feed the label-dependent columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelContext {
    pub known_bots: BTreeSet<u64>,
    pub clusters: Option<BTreeMap<u64, usize>>,
}

/// Everything about a dataset that does not depend on labels, computed once.
#[derive(Debug, Clone)]
pub struct FeatureContext {
    pub user_ids: Vec<u64>,
    pub topics: TopicSet,
    pub profile: ProfileContext,
    pub network: NetworkContext,
    /// Syntax, eliza, semantic, temporal and profile values per user. The
    /// profile Jaccard entry is recomputed at assembly.
    fixed: BTreeMap<u64, [FeatureValues; 5]>,
}

impl FeatureContext {
    pub fn new(ds: &Dataset, lexicon: &SentimentLexicon, params: &FeatureParams) -> Result<Self> {
        let topics = TopicSet::expanded(&ds.topic_keywords, &ds.tweets, params.topic_min_weight);
        let by_user = ds.tweets_by_user();
        let empty = Vec::new();

        let sentiments: BTreeMap<u64, Vec<f64>> = by_user
            .iter()
            .map(|(&u, ts)| (u, topic_sentiments(ts, &topics, lexicon)))
            .collect();
        let mean_sentiment: BTreeMap<u64, f64> = sentiments
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(&u, s)| (u, s.iter().sum::<f64>() / s.len() as f64))
            .collect();
        let network = NetworkContext::new(ds, mean_sentiment)?;
        let profile = ProfileContext::new(ds);

        let step = params.series_step_days.max(1);
        let days: Vec<u32> = (0..=ds.duration_days).step_by(step as usize).collect();
        let series = follower_series(ds, &days)?;
        let mut outgoing: BTreeMap<u64, Vec<&NetworkEvent>> = BTreeMap::new();
        for e in &ds.network_events {
            outgoing.entry(e.from_user).or_default().push(e);
        }
        let tparams = TemporalParams { session_breaks: params.session_breaks, duration_days: ds.duration_days };

        let mut accounts: Vec<_> = ds.accounts.iter().collect();
        accounts.sort_by_key(|a| a.user_id);
        let mut fixed = BTreeMap::new();
        for a in &accounts {
            let u = a.user_id;
            let tweets = by_user.get(&u).unwrap_or(&empty);
            let sent = sentiments.get(&u).map_or(&[][..], Vec::as_slice);
            let out = outgoing.get(&u).map_or(&[][..], Vec::as_slice);
            let ser = series.get(&u).map_or(&[][..], Vec::as_slice);
            fixed.insert(
                u,
                [
                    syntax_features(tweets),
                    eliza_score(tweets),
                    semantic_features(tweets, &topics, lexicon, &network.neighbor_sentiments(u)),
                    temporal_features(tweets, sent, out, ser, &tparams),
                    profile_features(a, tweets, &profile, &BTreeSet::new()),
                ],
            );
        }
        Ok(Self { user_ids: accounts.iter().map(|a| a.user_id).collect(), topics, profile, network, fixed })
    }

    fn jaccard_to_known(&self, user: u64, known_bots: &BTreeSet<u64>) -> f64 {
        let Some(own) = self.profile.tokens.get(&user) else { return 0.0 };
        known_bots
            .iter()
            .filter(|&&b| b != user)
            .filter_map(|b| self.profile.tokens.get(b))
            .map(|t| super::jaccard(own, t))
            .fold(0.0, f64::max)
    }

    fn row(&self, user: u64, labels: &LabelContext, fraction: Option<f64>) -> Option<FeatureVector> {
        let fixed = self.fixed.get(&user)?;
        let mut profile = fixed[4].clone();
        profile.set("jaccard_to_known_bots", self.jaccard_to_known(user, &labels.known_bots));
        let net = network_values(user, &self.network, &labels.known_bots, fraction);
        Some(FeatureVector::from_parts(user, &[&fixed[0], &fixed[1], &fixed[2], &fixed[3], &profile, &net]))
    }

    /// One user's full vector under the given labels.
    pub fn vector(&self, user: u64, labels: &LabelContext) -> Option<FeatureVector> {
        let fraction = labels.clusters.as_ref().and_then(|c| cluster_bot_fraction(user, c, &labels.known_bots));
        self.row(user, labels, fraction)
    }
}

/// Raw and z-scored per-user features, rows in ascending user id.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub user_ids: Vec<u64>,
    pub names: Vec<String>,
    pub raw: Array2<f64>,
    pub missing: Array2<bool>,
    /// Column mean and population std after imputation.
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub z: Array2<f64>,
}

impl FeatureMatrix {
    /// Mean-imputes masked cells, then z-scores every column.
    pub fn from_raw(user_ids: Vec<u64>, names: Vec<String>, raw: Array2<f64>, missing: Array2<bool>) -> Self {
        let (n, d) = raw.dim();
        let mut filled = raw.clone();
        let mut mean = vec![0.0; d];
        let mut std = vec![0.0; d];
        for j in 0..d {
            let present: Vec<f64> = (0..n).filter(|&i| !missing[[i, j]]).map(|i| raw[[i, j]]).collect();
            let impute = if present.is_empty() { 0.0 } else { present.iter().sum::<f64>() / present.len() as f64 };
            for i in 0..n {
                if missing[[i, j]] {
                    filled[[i, j]] = impute;
                }
            }
            if n > 0 {
                let col = filled.column(j);
                let m = col.sum() / n as f64;
                mean[j] = m;
                std[j] = (col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64).sqrt();
            }
        }
        let mut z = Array2::zeros((n, d));
        for j in 0..d {
            if std[j] >= MIN_STD {
                for i in 0..n {
                    z[[i, j]] = (filled[[i, j]] - mean[j]) / std[j];
                }
            }
        }
        Self { user_ids, names, raw, missing, mean, std, z }
    }

    pub fn n_rows(&self) -> usize {
        self.user_ids.len()
    }

    pub fn row_of(&self, user: u64) -> Option<usize> {
        self.user_ids.binary_search(&user).ok()
    }

    /// Z-scores without the label-dependent columns.
    pub fn label_free_z(&self) -> Array2<f64> {
        let keep: Vec<usize> = (0..self.names.len()).filter(|&j| !super::LABEL_FEATURES.contains(&self.names[j].as_str())).collect();
        self.z.select(ndarray::Axis(1), &keep)
    }

    pub fn column_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// CSV with a `user_id` column followed by the feature names; raw values,
    /// masked cells left empty.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["user_id".to_string()];
        header.extend(self.names.iter().cloned());
        out.write_record(&header)?;
        for (i, u) in self.user_ids.iter().enumerate() {
            let mut rec = vec![u.to_string()];
            for j in 0..self.names.len() {
                rec.push(if self.missing[[i, j]] { String::new() } else { self.raw[[i, j]].to_string() });
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        let parse_err = |line: usize, message: String| Error::Parse { file: "features.csv".into(), line, message };
        if header.get(0) != Some("user_id") {
            return Err(parse_err(1, "first column must be user_id".into()));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let d = names.len();
        let mut ids = Vec::new();
        let mut vals = Vec::new();
        let mut mask = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = k + 2;
            if rec.len() != d + 1 {
                return Err(parse_err(line, format!("expected {} fields, got {}", d + 1, rec.len())));
            }
            ids.push(rec[0].parse::<u64>().map_err(|e| parse_err(line, e.to_string()))?);
            for cell in rec.iter().skip(1) {
                if cell.is_empty() {
                    vals.push(0.0);
                    mask.push(true);
                } else {
                    vals.push(cell.parse::<f64>().map_err(|e| parse_err(line, format!("{cell:?}: {e}")))?);
                    mask.push(false);
                }
            }
        }
        let n = ids.len();
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(0, "user ids must be strictly ascending".into()));
        }
        let raw = Array2::from_shape_vec((n, d), vals).expect("row lengths checked");
        let missing = Array2::from_shape_vec((n, d), mask).expect("row lengths checked");
        Ok(Self::from_raw(ids, names, raw, missing))
    }
}

/// Full matrix for every account under the given labels.
pub fn assemble_matrix(ctx: &FeatureContext, labels: &LabelContext) -> FeatureMatrix {
    let fractions: BTreeMap<u64, f64> = match &labels.clusters {
        None => BTreeMap::new(),
        Some(clusters) => {
            let mut size: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            for (u, &c) in clusters {
                let e = size.entry(c).or_default();
                e.0 += 1;
                e.1 += usize::from(labels.known_bots.contains(u));
            }
            clusters.iter().map(|(&u, c)| (u, size[c].1 as f64 / size[c].0 as f64)).collect()
        }
    };
    let n = ctx.user_ids.len();
    let mut raw = Array2::zeros((n, FEATURE_COUNT));
    let mut missing = Array2::from_elem((n, FEATURE_COUNT), false);
    for (i, &u) in ctx.user_ids.iter().enumerate() {
        let v = ctx.row(u, labels, fractions.get(&u).copied()).expect("context covers its own users");
        for j in 0..FEATURE_COUNT {
            raw[[i, j]] = v.values[j];
            missing[[i, j]] = v.missing[j];
        }
    }
    FeatureMatrix::from_raw(ctx.user_ids.clone(), feature_names().into_iter().map(String::from).collect(), raw, missing)
}
