use std::collections::BTreeSet;

use super::{FeatureValues, ELIZA_FEATURES, SYNTAX_FEATURES};
use crate::corpus::Tweet;

fn is_special(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

fn last_token(text: &str) -> Option<&str> {
    text.split_whitespace().last()
}

/// Tweet-syntax averages and fractions. Uses the stored entity lists; the
/// text is consulted only for special characters and the final token.
pub fn syntax_features(tweets: &[&Tweet]) -> FeatureValues {
    let mut out = FeatureValues::default();
    if tweets.is_empty() {
        for name in SYNTAX_FEATURES {
            out.push_missing(name);
        }
        return out;
    }
    let n = tweets.len() as f64;
    let mean = |f: &dyn Fn(&Tweet) -> f64| tweets.iter().map(|t| f(t)).sum::<f64>() / n;
    let frac = |f: &dyn Fn(&Tweet) -> bool| tweets.iter().filter(|t| f(t)).count() as f64 / n;

    out.push("avg_hashtags", mean(&|t| t.hashtags.len() as f64));
    out.push("avg_mentions", mean(&|t| t.mentions.len() as f64));
    out.push("avg_links", mean(&|t| t.urls.len() as f64));
    out.push("avg_special_chars", mean(&|t| t.text.chars().filter(|&c| is_special(c)).count() as f64));
    out.push("retweet_fraction", frac(&|t| t.is_retweet));
    out.push("geo_fraction", frac(&|t| t.geo_enabled));
    out.push(
        "end_punct_fraction",
        frac(&|t| t.text.trim_end().ends_with(['.', '!', '?', ',', ';', ':'])),
    );
    out.push("end_hashtag_fraction", frac(&|t| last_token(&t.text).is_some_and(|s| s.starts_with('#'))));
    out.push(
        "end_link_fraction",
        frac(&|t| last_token(&t.text).is_some_and(|s| s.starts_with("http://") || s.starts_with("https://"))),
    );
    out
}

/// Opening template of a tweet: its first three tokens, lowercased.
fn opening(text: &str) -> String {
    text.split_whitespace().take(3).map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

/// `1 − distinct openings / tweets`. High when tweets reuse a few templated
/// openings. Fewer than two tweets is undefined.
pub fn eliza_score(tweets: &[&Tweet]) -> FeatureValues {
    let mut out = FeatureValues::default();
    if tweets.len() < 2 {
        out.push_missing(ELIZA_FEATURES[0]);
        return out;
    }
    let distinct: BTreeSet<String> = tweets.iter().map(|t| opening(&t.text)).collect();
    out.push(ELIZA_FEATURES[0], 1.0 - distinct.len() as f64 / tweets.len() as f64);
    out
}
