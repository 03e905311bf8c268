use std::collections::{BTreeMap, BTreeSet};

use super::model::{Dataset, NetworkEvent};
use crate::error::{Error, Result};

/// Directed follow graph at one point in time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowGraph {
    pub edges: BTreeSet<(u64, u64)>,
}

impl FollowGraph {
    pub fn contains(&self, from: u64, to: u64) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn following(&self, user: u64) -> impl Iterator<Item = u64> + '_ {
        self.edges
            .range((user, 0)..=(user, u64::MAX))
            .map(|&(_, to)| to)
    }

    pub fn in_degrees(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for &(_, to) in &self.edges {
            *m.entry(to).or_insert(0) += 1;
        }
        m
    }

    pub fn out_degrees(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for &(from, _) in &self.edges {
            *m.entry(from).or_insert(0) += 1;
        }
        m
    }

    /// Followers and followings of each user, merged.
    pub fn neighbors(&self) -> BTreeMap<u64, BTreeSet<u64>> {
        let mut m: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            m.entry(a).or_default().insert(b);
            m.entry(b).or_default().insert(a);
        }
        m
    }
}

/// Events in replay order: by timestamp, then by position in the log.
fn replay_order(events: &[NetworkEvent]) -> Vec<&NetworkEvent> {
    let mut idx: Vec<usize> = (0..events.len()).collect();
    idx.sort_by_key(|&i| (events[i].timestamp, i));
    idx.into_iter().map(|i| &events[i]).collect()
}

fn apply(edges: &mut BTreeSet<(u64, u64)>, ev: &NetworkEvent) {
    if ev.weight == 1 {
        edges.insert((ev.from_user, ev.to_user));
    } else {
        edges.remove(&(ev.from_user, ev.to_user));
    }
}

/// Follow graph at the end of `day`: an arc exists iff the latest event for
/// the pair at or before the cutoff is a follow.
pub fn network_snapshot(ds: &Dataset, day: u32) -> Result<FollowGraph> {
    if day > ds.duration_days {
        return Err(Error::DayOutOfRange { day, duration: ds.duration_days });
    }
    let cutoff = ds.day_cutoff(day);
    let mut edges = BTreeSet::new();
    for ev in replay_order(&ds.network_events) {
        if ev.timestamp > cutoff {
            break;
        }
        apply(&mut edges, ev);
    }
    Ok(FollowGraph { edges })
}

/// Follower counts (in-degree) for every user at each checkpoint day, from a
/// single replay of the log.
pub fn follower_series(ds: &Dataset, days: &[u32]) -> Result<BTreeMap<u64, Vec<usize>>> {
    if let Some(&bad) = days.iter().find(|&&d| d > ds.duration_days) {
        return Err(Error::DayOutOfRange { day: bad, duration: ds.duration_days });
    }
    let mut order: Vec<(usize, u32)> = days.iter().copied().enumerate().collect();
    order.sort_by_key(|&(_, d)| d);

    let events = replay_order(&ds.network_events);
    let mut edges = BTreeSet::new();
    let mut in_deg: BTreeMap<u64, usize> = BTreeMap::new();
    let mut out: BTreeMap<u64, Vec<usize>> = ds
        .accounts
        .iter()
        .map(|a| (a.user_id, vec![0; days.len()]))
        .collect();

    let mut next = 0;
    for (slot, day) in order {
        let cutoff = ds.day_cutoff(day);
        while next < events.len() && events[next].timestamp <= cutoff {
            let ev = events[next];
            let key = (ev.from_user, ev.to_user);
            let had = edges.contains(&key);
            apply(&mut edges, ev);
            match (had, edges.contains(&key)) {
                (false, true) => *in_deg.entry(ev.to_user).or_insert(0) += 1,
                (true, false) => *in_deg.entry(ev.to_user).or_insert(0) -= 1,
                _ => {}
            }
            next += 1;
        }
        for (id, series) in out.iter_mut() {
            series[slot] = in_deg.get(id).copied().unwrap_or(0);
        }
    }
    Ok(out)
}
