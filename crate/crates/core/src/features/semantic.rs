use std::collections::BTreeSet;

use super::{score_sentiment, FeatureValues, SentimentLexicon};
use crate::corpus::Tweet;
use crate::graphs::{expand_keywords, hashtag_cooccurrence};
use crate::text::{fold_tag, words};

/// Topic membership test: a tweet is on-topic when it carries one of `tags`
/// or contains one of `words`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TopicSet {
    pub tags: BTreeSet<String>,
    pub words: BTreeSet<String>,
}

impl TopicSet {
    /// Plain keywords become words; keywords written as `#tag` become tag
    /// seeds. No expansion.
    pub fn from_keywords(keywords: &[String]) -> Self {
        let mut set = Self::default();
        for k in keywords {
            if k.starts_with('#') {
                set.tags.insert(fold_tag(k));
            } else {
                set.words.insert(k.to_lowercase());
            }
        }
        set
    }

    /// Seeds expanded one hop through the hashtag co-occurrence network.
    pub fn expanded(keywords: &[String], tweets: &[Tweet], min_weight: f64) -> Self {
        let mut set = Self::from_keywords(keywords);
        let seeds: Vec<String> = set.tags.iter().cloned().collect();
        if !seeds.is_empty() {
            let graph = hashtag_cooccurrence::<f64>(tweets);
            set.tags = expand_keywords(&graph, &seeds, min_weight);
        }
        set
    }

    pub fn is_topic(&self, tweet: &Tweet) -> bool {
        tweet.hashtags.iter().any(|h| self.tags.contains(&fold_tag(h)))
            || words(&tweet.text).iter().any(|w| self.words.contains(w))
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Topic sentiment of each on-topic tweet, in the order given.
pub(crate) fn topic_sentiments(tweets: &[&Tweet], topics: &TopicSet, lexicon: &SentimentLexicon) -> Vec<f64> {
    tweets.iter().filter(|t| topics.is_topic(t)).map(|t| score_sentiment(&t.text, lexicon)).collect()
}

/// Semantic family. `neighbor_sentiments` holds the mean topic sentiment of
/// each follow neighbour that has one.
pub fn semantic_features(
    tweets: &[&Tweet],
    topics: &TopicSet,
    lexicon: &SentimentLexicon,
    neighbor_sentiments: &[f64],
) -> FeatureValues {
    let scores = topic_sentiments(tweets, topics, lexicon);
    let avg = mean(scores.iter().copied());
    let neighbors = mean(neighbor_sentiments.iter().copied());

    let mut out = FeatureValues::default();
    out.push("topic_tweet_count", scores.len() as f64);
    out.push_opt("avg_topic_sentiment", avg);
    out.push_opt("pos_strength", mean(scores.iter().copied().filter(|s| *s > 0.0)));
    out.push_opt("neg_strength", mean(scores.iter().copied().filter(|s| *s < 0.0)));
    out.push_opt("contradiction_rank", avg.zip(neighbors).map(|(a, b)| (a - b).abs()));
    if tweets.is_empty() {
        out.push_missing("language_count");
    } else {
        let langs: BTreeSet<&str> = tweets.iter().map(|t| t.language.as_str()).collect();
        out.push("language_count", langs.len() as f64);
    }
    out.push_opt(
        "sentiment_inconsistency",
        mean(tweets.iter().filter_map(|t| {
            t.url_text
                .as_deref()
                .map(|page| (score_sentiment(&t.text, lexicon) - score_sentiment(page, lexicon)).abs())
        })),
    );
    out
}
