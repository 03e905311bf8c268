use std::collections::{BTreeMap, BTreeSet};

use super::FeatureValues;
use crate::corpus::{network_snapshot, Dataset, FollowGraph};
use crate::error::Result;
use crate::graphs::{betweenness, interaction_graph, local_clustering, pagerank, DiGraph, Interaction, PageRankConfig};

/// Centralities of one interaction network, keyed by user id.
#[derive(Debug, Clone, Default)]
pub struct Centralities {
    pub pagerank: BTreeMap<u64, f64>,
    pub betweenness: BTreeMap<u64, f64>,
    pub clustering: BTreeMap<u64, f64>,
}

impl Centralities {
    fn of(graph: &DiGraph<f64>) -> Result<Self> {
        let pr = pagerank(graph, PageRankConfig::default())?;
        let und = graph.to_undirected();
        Ok(Self {
            pagerank: graph.keyed(&pr.scores),
            betweenness: und.keyed(&betweenness(&und)),
            clustering: und.keyed(&local_clustering(&und)),
        })
    }
}

/// Label-independent network structure shared by every user's row.
#[derive(Debug, Clone)]
pub struct NetworkContext {
    pub follow: FollowGraph,
    pub in_degree: BTreeMap<u64, usize>,
    pub out_degree: BTreeMap<u64, usize>,
    /// Followers and followings merged.
    pub neighbors: BTreeMap<u64, BTreeSet<u64>>,
    pub retweet: Centralities,
    pub mention: Centralities,
    /// Mean topic sentiment of each user that has on-topic tweets.
    pub topic_sentiment: BTreeMap<u64, f64>,
}

impl NetworkContext {
    pub fn new(ds: &Dataset, topic_sentiment: BTreeMap<u64, f64>) -> Result<Self> {
        let follow = network_snapshot(ds, ds.duration_days)?;
        let names: BTreeMap<String, u64> =
            ds.accounts.iter().map(|a| (a.screen_name.to_lowercase(), a.user_id)).collect();
        let ids = ds.account_ids();
        let rt = interaction_graph::<f64>(&ds.tweets, Interaction::Retweet, &names, ids.iter().copied());
        let mn = interaction_graph::<f64>(&ds.tweets, Interaction::Mention, &names, ids.iter().copied());
        Ok(Self {
            in_degree: follow.in_degrees(),
            out_degree: follow.out_degrees(),
            neighbors: follow.neighbors(),
            follow,
            retweet: Centralities::of(&rt)?,
            mention: Centralities::of(&mn)?,
            topic_sentiment,
        })
    }

    /// Mean topic sentiments of the user's follow neighbours that have one.
    pub fn neighbor_sentiments(&self, user: u64) -> Vec<f64> {
        self.neighbors
            .get(&user)
            .map(|ns| ns.iter().filter_map(|n| self.topic_sentiment.get(n).copied()).collect())
            .unwrap_or_default()
    }
}

/// Fraction of confirmed bots in the user's cluster, the user included.
/// `None` when the user has no cluster.
pub(crate) fn cluster_bot_fraction(user: u64, clusters: &BTreeMap<u64, usize>, known_bots: &BTreeSet<u64>) -> Option<f64> {
    let c = *clusters.get(&user)?;
    let members: Vec<u64> = clusters.iter().filter(|(_, &k)| k == c).map(|(&u, _)| u).collect();
    let bots = members.iter().filter(|m| known_bots.contains(m)).count();
    Some(bots as f64 / members.len() as f64)
}

/// Network family. `clusters` maps users to a cluster id; users absent from
/// it (noise, or no clustering yet) get a masked cluster fraction.
pub fn network_features(
    user: u64,
    ctx: &NetworkContext,
    known_bots: &BTreeSet<u64>,
    clusters: Option<&BTreeMap<u64, usize>>,
) -> FeatureValues {
    network_values(user, ctx, known_bots, clusters.and_then(|c| cluster_bot_fraction(user, c, known_bots)))
}

pub(crate) fn network_values(user: u64, ctx: &NetworkContext, known_bots: &BTreeSet<u64>, fraction: Option<f64>) -> FeatureValues {
    let get = |m: &BTreeMap<u64, f64>| m.get(&user).copied().unwrap_or(0.0);
    let mut out = FeatureValues::default();
    out.push("in_degree", ctx.in_degree.get(&user).copied().unwrap_or(0) as f64);
    out.push("out_degree", ctx.out_degree.get(&user).copied().unwrap_or(0) as f64);
    out.push("pagerank_retweet", get(&ctx.retweet.pagerank));
    out.push("pagerank_mention", get(&ctx.mention.pagerank));
    out.push("betweenness_retweet", get(&ctx.retweet.betweenness));
    out.push("betweenness_mention", get(&ctx.mention.betweenness));
    out.push("clustering_coeff_retweet", get(&ctx.retweet.clustering));
    out.push("clustering_coeff_mention", get(&ctx.mention.clustering));
    out.push("known_bots_followed", ctx.follow.following(user).filter(|b| known_bots.contains(b)).count() as f64);
    out.push_opt("cluster_bot_fraction", fraction);
    let own = ctx.topic_sentiment.get(&user).copied();
    let nbrs = ctx.neighbor_sentiments(user);
    out.push_opt(
        "sentiment_deviation_from_neighbors",
        own.filter(|_| !nbrs.is_empty())
            .map(|s| nbrs.iter().map(|n| (s - n).abs()).sum::<f64>() / nbrs.len() as f64),
    );
    out
}
