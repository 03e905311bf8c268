use std::collections::{BTreeMap, BTreeSet};

use super::{DiGraph, WeightedGraph};
use crate::corpus::Tweet;
use crate::scalar::Scalar;
use crate::text::fold_tag;

/// Hashtag co-occurrence network: one node per case-folded tag, edge weight
/// = number of tweets containing both tags.
pub fn hashtag_cooccurrence<T: Scalar>(tweets: &[Tweet]) -> WeightedGraph<T, String> {
    let mut g = WeightedGraph::new();
    for t in tweets {
        let tags: BTreeSet<String> = t.hashtags.iter().map(|h| fold_tag(h)).collect();
        let idx: Vec<usize> = tags.into_iter().map(|tag| g.add_node(tag)).collect();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                g.add_edge_idx(i, j, T::one());
            }
        }
    }
    g
}

/// Seeds plus every tag joined to a seed by an edge of weight ≥ `min_weight`.
/// One hop only. Seeds may be given with or without `#`.
pub fn expand_keywords<T: Scalar>(
    graph: &WeightedGraph<T, String>,
    seeds: &[String],
    min_weight: T,
) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = seeds.iter().map(|s| fold_tag(s)).collect();
    for seed in seeds {
        if let Some(i) = graph.index_of(&fold_tag(seed)) {
            for (j, w) in graph.neighbors(i) {
                if w >= min_weight {
                    out.insert(graph.nodes()[j].clone());
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interaction {
    Retweet,
    Mention,
}

/// Retweet or mention network. Arc `u → v` carries the number of times `u`
/// retweeted (or mentioned) `v`. Mentions are resolved through
/// `screen_names` (lowercased screen name → user id); unresolved names are
/// skipped. `base_nodes` are added first so isolated accounts are present.
pub fn interaction_graph<T: Scalar>(
    tweets: &[Tweet],
    kind: Interaction,
    screen_names: &BTreeMap<String, u64>,
    base_nodes: impl IntoIterator<Item = u64>,
) -> DiGraph<T> {
    let mut g = DiGraph::with_nodes(base_nodes);
    for t in tweets {
        match kind {
            Interaction::Retweet => {
                if let Some(src) = t.retweet_of {
                    g.add_arc(t.user_id, src, T::one());
                }
            }
            Interaction::Mention => {
                // "RT @x:" credits x through the retweet graph, not as a mention
                let skip = usize::from(t.is_retweet);
                for name in t.mentions.iter().skip(skip) {
                    if let Some(&to) = screen_names.get(&name.to_lowercase()) {
                        g.add_arc(t.user_id, to, T::one());
                    }
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::IndexedRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tweet(user: u64, text: &str) -> Tweet {
        let e = crate::text::extract_entities(text);
        Tweet {
            tweet_id: 0,
            user_id: user,
            timestamp: 0,
            text: text.into(),
            hashtags: e.hashtags,
            mentions: e.mentions,
            urls: e.urls,
            is_retweet: text.starts_with("RT "),
            retweet_of: None,
            geo_enabled: false,
            language: "en".into(),
            url_text: None,
        }
    }

    #[test]
    fn repeated_pair_counts() {
        let ts: Vec<_> = (0..3).map(|_| tweet(1, "x #a #B")).collect();
        let g = hashtag_cooccurrence::<f64>(&ts);
        assert_eq!(g.weight(&"a".into(), &"b".into()), Some(3.0));
    }

    #[test]
    fn single_tag_is_isolated_node() {
        let g = hashtag_cooccurrence::<f64>(&[tweet(1, "#solo here")]);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn duplicate_tags_in_one_tweet_count_once() {
        let g = hashtag_cooccurrence::<f64>(&[tweet(1, "#a #a #b")]);
        assert_eq!(g.weight(&"a".into(), &"b".into()), Some(1.0));
    }

    #[test]
    fn cooccurrence_matches_pairwise_recount() {
        let tags = ["a", "b", "c", "d", "e", "f"];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tweets: Vec<Tweet> = (0..200)
            .map(|_| {
                let k = rng.random_range(0..5);
                let chosen: Vec<String> = (0..k).map(|_| format!("#{}", tags.choose(&mut rng).unwrap())).collect();
                tweet(1, &chosen.join(" "))
            })
            .collect();
        let g = hashtag_cooccurrence::<f64>(&tweets);
        for a in tags {
            for b in tags {
                if a >= b {
                    continue;
                }
                let expected = tweets
                    .iter()
                    .filter(|t| {
                        t.text.split_whitespace().any(|x| x == format!("#{a}"))
                            && t.text.split_whitespace().any(|x| x == format!("#{b}"))
                    })
                    .count();
                let got = g.weight(&a.to_string(), &b.to_string()).unwrap_or(0.0);
                assert_eq!(got, expected as f64, "{a}-{b}");
            }
        }
    }

    fn chain() -> WeightedGraph<f64, String> {
        let mut g = WeightedGraph::new();
        g.add_edge("vaxfacts".to_string(), "provax".to_string(), 10.0);
        g.add_edge("provax".to_string(), "b".to_string(), 50.0);
        g.add_edge("vaxfacts".to_string(), "weak".to_string(), 2.0);
        g
    }

    #[test]
    fn expansion_threshold_and_one_hop() {
        let g = chain();
        let got = expand_keywords(&g, &["#vaxfacts".into()], 5.0);
        assert_eq!(got, BTreeSet::from(["vaxfacts".to_string(), "provax".to_string()]));
        let none = expand_keywords(&g, &["#vaxfacts".into()], 100.0);
        assert_eq!(none, BTreeSet::from(["vaxfacts".to_string()]));
    }

    #[test]
    fn retweet_arcs_accumulate() {
        let mut a = tweet(1, "RT @v: hi");
        a.retweet_of = Some(2);
        let g = interaction_graph::<f64>(&[a.clone(), a], Interaction::Retweet, &BTreeMap::new(), []);
        assert_eq!(g.arc_weight(1, 2), Some(2.0));
        let empty = interaction_graph::<f64>(&[tweet(1, "hello")], Interaction::Retweet, &BTreeMap::new(), [1]);
        assert_eq!(empty.arc_count(), 0);
    }

    #[test]
    fn mentions_resolve_by_screen_name() {
        let names = BTreeMap::from([("amy".to_string(), 7u64), ("bob".to_string(), 8u64)]);
        let ts = [tweet(1, "hey @Amy and @bob and @ghost"), tweet(1, "RT @bob: yo @amy")];
        let g = interaction_graph::<f64>(&ts, Interaction::Mention, &names, []);
        assert_eq!(g.arc_weight(1, 7), Some(2.0));
        assert_eq!(g.arc_weight(1, 8), Some(1.0));
    }
}
