use std::collections::BTreeMap;

use bothunt_core::corpus::Dataset;
use bothunt_core::graphs::{hashtag_cooccurrence, interaction_graph, pagerank, Interaction, PageRankConfig};
use serde::{Deserialize, Serialize};

use crate::error::{WorkbenchError, WorkbenchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Hashtag,
    Retweet,
    Mention,
}

impl std::str::FromStr for GraphKind {
    type Err = WorkbenchError;
    fn from_str(s: &str) -> WorkbenchResult<Self> {
        match s {
            "hashtag" => Ok(GraphKind::Hashtag),
            "retweet" => Ok(GraphKind::Retweet),
            "mention" => Ok(GraphKind::Mention),
            other => Err(WorkbenchError::BadRequest(format!("unknown graph kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub kind: GraphKind,
    pub nodes: usize,
    pub edges: usize,
    /// Highest PageRank nodes (user ids for the interaction graphs), at most ten.
    pub top: Vec<(String, f64)>,
}

fn screen_names(ds: &Dataset) -> BTreeMap<String, u64> {
    ds.accounts.iter().map(|a| (a.screen_name.to_lowercase(), a.user_id)).collect()
}

fn interaction(ds: &Dataset, kind: GraphKind) -> bothunt_core::DiGraph {
    let k = if kind == GraphKind::Retweet { Interaction::Retweet } else { Interaction::Mention };
    interaction_graph(&ds.tweets, k, &screen_names(ds), ds.accounts.iter().map(|a| a.user_id))
}

/// `src dst weight` lines for one graph.
pub fn edge_list(ds: &Dataset, kind: GraphKind) -> String {
    match kind {
        GraphKind::Hashtag => hashtag_cooccurrence::<f64>(&ds.tweets).to_edge_list(),
        _ => interaction(ds, kind).to_edge_list(),
    }
}

pub fn summarize(ds: &Dataset, kind: GraphKind) -> WorkbenchResult<GraphSummary> {
    let (nodes, edges, mut top): (usize, usize, Vec<(String, f64)>) = match kind {
        GraphKind::Hashtag => {
            // tags ranked by weighted degree
            let g = hashtag_cooccurrence::<f64>(&ds.tweets);
            let strength = (0..g.node_count()).map(|i| (g.nodes()[i].clone(), g.neighbors(i).map(|(_, w)| w).sum())).collect();
            (g.node_count(), g.edge_count(), strength)
        }
        _ => {
            let g = interaction(ds, kind);
            let pr = pagerank(&g, PageRankConfig::default())?;
            (g.node_count(), g.arc_count(), g.nodes().iter().map(|u| u.to_string()).zip(pr.scores).collect())
        }
    };
    top.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    top.truncate(10);
    Ok(GraphSummary { kind, nodes, edges, top })
}
