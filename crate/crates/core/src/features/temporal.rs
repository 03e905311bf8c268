use super::{FeatureValues, TEMPORAL_FEATURES};
use crate::corpus::{NetworkEvent, Tweet};

/// Gap histogram size: `[0,1)`, twenty log₂ bins `[2^(i-1), 2^i)` and an
/// overflow bin for gaps of 2²⁰ seconds or more.
pub const GAP_BINS: usize = 22;

/// Flip-flop dead zone.
const FLIP_THRESHOLD: f64 = 0.1;
const SNR_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalParams {
    /// Session break thresholds in seconds, short then long.
    pub session_breaks: [i64; 2],
    pub duration_days: u32,
}

impl Default for TemporalParams {
    fn default() -> Self {
        Self { session_breaks: [300, 600], duration_days: 28 }
    }
}

pub fn gap_bin(gap: i64) -> usize {
    if gap < 1 {
        0
    } else {
        // bit length of gap = floor(log2 gap) + 1
        ((u64::BITS - (gap as u64).leading_zeros()) as usize).min(GAP_BINS - 1)
    }
}

/// Shannon entropy in bits of a count histogram; 0 for an empty one.
pub fn entropy_bits(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

fn gaps(times: &[i64]) -> impl Iterator<Item = i64> + '_ {
    times.windows(2).map(|w| w[1] - w[0])
}

fn longest_session_hours(times: &[i64], brk: i64) -> f64 {
    let mut best = 0i64;
    let mut start = times[0];
    for w in times.windows(2) {
        if w[1] - w[0] > brk {
            start = w[1];
        }
        best = best.max(w[1] - start);
    }
    best as f64 / 3600.0
}

fn flipflops(sentiments: &[f64]) -> usize {
    let signs: Vec<bool> = sentiments.iter().filter(|s| s.abs() >= FLIP_THRESHOLD).map(|s| *s > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn population_variance(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    Some(xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n)
}

/// Temporal family.
///
/// `topic_sentiments` are the user's on-topic tweet scores in time order,
/// `outgoing` the follow log entries issued by the user and `series` the
/// follower count at each weekly checkpoint.
pub fn temporal_features(
    tweets: &[&Tweet],
    topic_sentiments: &[f64],
    outgoing: &[&NetworkEvent],
    series: &[usize],
    params: &TemporalParams,
) -> FeatureValues {
    let mut out = FeatureValues::default();
    let mut times: Vec<i64> = tweets.iter().map(|t| t.timestamp).collect();
    times.sort_unstable();

    if times.len() < 2 {
        for name in &TEMPORAL_FEATURES[..3] {
            out.push_missing(name);
        }
    } else {
        let mut hist = [0usize; GAP_BINS];
        for g in gaps(&times) {
            hist[gap_bin(g)] += 1;
        }
        out.push(TEMPORAL_FEATURES[0], entropy_bits(&hist));
        out.push(TEMPORAL_FEATURES[1], longest_session_hours(&times, params.session_breaks[0]));
        out.push(TEMPORAL_FEATURES[2], longest_session_hours(&times, params.session_breaks[1]));
    }
    out.push("tweets_per_day", times.len() as f64 / f64::from(params.duration_days.max(1)));

    if topic_sentiments.is_empty() {
        out.push_missing("flipflop_count");
    } else {
        out.push("flipflop_count", flipflops(topic_sentiments) as f64);
    }
    out.push_opt("sentiment_variance", population_variance(topic_sentiments));

    let unfollows = outgoing.iter().filter(|e| e.weight == 0).count();
    out.push(
        "dropped_follower_pct",
        if outgoing.is_empty() { 0.0 } else { unfollows as f64 / outgoing.len() as f64 },
    );

    if series.is_empty() {
        for name in &TEMPORAL_FEATURES[7..] {
            out.push_missing(name);
        }
    } else {
        let xs: Vec<f64> = series.iter().map(|&c| c as f64).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let std = population_variance(&xs).unwrap_or(0.0).sqrt();
        out.push("snr", mean / (std + SNR_EPS));
        out.push("series_min", xs.iter().copied().fold(f64::INFINITY, f64::min));
        out.push("series_max", xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        out.push("series_entropy", entropy_bits(series));
    }
    out
}
