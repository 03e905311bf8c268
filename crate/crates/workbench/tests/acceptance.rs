//! Acceptance suite. Runs every primary criterion, prints one PASS/FAIL line
//! per criterion and exits non-zero if any fails or overruns its time limit.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bothunt_core::corpus::{generate_challenge, load_dataset, write_dataset, GeneratorConfig};
use bothunt_core::detect::{dbscan, estimate_eps, nmf, NmfConfig};
use bothunt_core::features::{entropy_bits, gap_bin, GAP_BINS};
use bothunt_core::graphs::{betweenness, louvain, pagerank, PageRankConfig};
use bothunt_core::learn::{hedge_init, hedge_select, hedge_update, HedgeState};
use bothunt_core::oracle::{replay, ChallengeState};
use bothunt_core::{DiGraph, Scoreboard, WeightedGraph};
use bothunt_workbench::{campaign_auto, CampaignConfig, Session, WorkbenchConfig};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn leaderboard() -> Outcome {
    for (team, misses, hits, acc, speed, fin) in oracles::LEADERBOARD {
        let b: Scoreboard = Scoreboard::from_counts(hits, misses, speed);
        let (ra, rf) = oracles::exact_score(hits, misses, speed);
        check!(b.accuracy == acc && b.final_score == fin, "{team}: got {} / {}", b.accuracy, b.final_score);
        check!(oracles::ratio_to_f64(ra) == acc && oracles::ratio_to_f64(rf) == fin, "{team}: rational oracle disagrees");
    }
    let mut c = ChallengeState::new([1, 2], 28).map_err(|e| e.to_string())?;
    for _ in 0..16 {
        c.advance_day().map_err(|e| e.to_string())?;
    }
    c.submit_guess(1).map_err(|e| e.to_string())?;
    c.submit_guess(2).map_err(|e| e.to_string())?;
    let speed = c.scoreboard::<f64>().speed;
    check!(speed == 12, "finishing on day 16 of 28 gave speed {speed}");
    Ok("6 rows exact, day 16 of 28 gives speed 12".into())
}

fn hedge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let script: Vec<(f64, Vec<f64>)> =
        (0..10).map(|_| (if rng.random_bool(0.6) { 1.0 } else { -1.0 }, (0..3).map(|_| rng.random_range(0.0..=1.0)).collect())).collect();
    let mut s: HedgeState<f64> = hedge_init(&["a", "b", "c"]).map_err(|e| e.to_string())?;
    for (t, (x, f)) in script.iter().enumerate() {
        s = hedge_update(&s, t as u64, *x, f).map_err(|e| e.to_string())?;
    }
    let want = oracles::hedge_closed_form(&script, 3);
    let mut worst: f64 = 0.0;
    for (lw, w) in s.log_weights().iter().zip(&want) {
        worst = worst.max((lw.exp() - w).abs() / w);
    }
    check!(worst < 1e-12, "relative error {worst:e}");

    let table: BTreeMap<u64, Vec<f64>> = (0..20u64).map(|u| (u, (0..3).map(|_| rng.random_range(0.0..=1.0)).collect())).collect();
    let ids: Vec<u64> = table.keys().copied().collect();
    let mut big = s.clone();
    big.weights.iter_mut().for_each(|w| *w *= 1e6);
    let (a, b) = (hedge_select(&s, &ids, &table).map_err(|e| e.to_string())?, hedge_select(&big, &ids, &table).map_err(|e| e.to_string())?);
    check!(a == b, "argmax moved from {a} to {b} under scaling");
    Ok(format!("max relative error {worst:.1e}, argmax stable"))
}

fn density_clustering() -> Outcome {
    for seed in 0..20 {
        let x = oracles::blob_instance(seed, 100, 5);
        let min_pts = 3 + (seed as usize % 5);
        let eps = estimate_eps(x.view(), min_pts).map_err(|e| e.to_string())? * (0.6 + 0.05 * seed as f64);
        let got = dbscan(x.view(), eps, min_pts);
        let want = oracles::brute_dbscan(x.view(), eps, min_pts);
        check!(oracles::same_partition(&got.labels, &want), "instance {seed} differs from brute force");
    }
    Ok("20/20 instances identical up to relabeling".into())
}

fn factorization() -> Outcome {
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Array2::from_shape_fn((30, 20), |_| rng.random_range(0.0..1.0));
        let e = nmf(x.view(), &NmfConfig { rank: 5, max_iter: 200, tol: 0.0, ortho_lambda: 0.0, seed, restarts: 1 }).map_err(|e| e.to_string())?;
        check!(e.history.windows(2).all(|p| p[1] <= p[0]), "objective rose on matrix {seed}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let w = Array2::from_shape_fn((30, 3), |_| rng.random_range(0.0..1.0));
    let h = Array2::from_shape_fn((3, 20), |_| rng.random_range(0.0..1.0));
    let x = w.dot(&h);
    let e = nmf(x.view(), &NmfConfig { rank: 3, max_iter: 20_000, tol: 0.0, ortho_lambda: 0.0, seed: 0, restarts: 3 }).map_err(|e| e.to_string())?;
    let err = e.relative_error(x.view());
    check!(err < 1e-6, "planted rank 3 relative error {err:e}");
    Ok(format!("50/50 monotone, planted rank-3 error {err:.1e}"))
}

fn centrality() -> Outcome {
    for seed in 0..20 {
        let arcs = oracles::random_digraph(seed, 50, 0.02 + 0.01 * seed as f64);
        let mut g = DiGraph::with_nodes(0..50);
        for &(a, b, w) in &arcs {
            g.add_arc(a as u64, b as u64, w);
        }
        let pr = pagerank(&g, PageRankConfig::default()).map_err(|e| e.to_string())?;
        let sum: f64 = pr.scores.iter().sum();
        check!((sum - 1.0).abs() <= 1e-9, "graph {seed}: sum {sum}");
        let want = oracles::dense_pagerank(50, &arcs, 0.85);
        let dev = pr.scores.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        check!(dev <= 1e-8, "graph {seed}: deviation {dev:e}");
    }
    for seed in 0..20 {
        let n = 4 + (seed as usize % 9);
        let edges = oracles::random_graph(seed, n, 0.35);
        let mut g = WeightedGraph::with_nodes(0..n as u64);
        for &(a, b) in &edges {
            g.add_edge(a as u64, b as u64, 1.0);
        }
        let got = betweenness(&g);
        let want = oracles::enumerate_betweenness(n, &edges);
        for v in 0..n {
            let w = oracles::ratio_to_f64(want[v]);
            check!((got[v] - w).abs() <= 1e-12 * w.max(1.0), "graph {seed} node {v}: {} vs {}", got[v], want[v]);
        }
    }
    Ok("20 pagerank and 20 betweenness graphs agree".into())
}

fn communities() -> Outcome {
    let mut g = WeightedGraph::with_nodes(0..20u64);
    for base in [0u64, 10] {
        for i in 0..10 {
            for j in i + 1..10 {
                g.add_edge(base + i, base + j, 1.0);
            }
        }
    }
    g.add_edge(9, 10, 1.0);
    let c = louvain(&g);
    check!(c.history.windows(2).all(|p| p[1] >= p[0]), "modularity decreased: {:?}", c.history);
    let first: BTreeSet<usize> = c.community[..10].iter().copied().collect();
    let second: BTreeSet<usize> = c.community[10..].iter().copied().collect();
    check!(first.len() == 1 && second.len() == 1 && first != second, "cliques not recovered: {:?}", c.community);
    Ok(format!("Q = {:.4}, both cliques recovered", c.modularity))
}

fn entropy() -> Outcome {
    let hist = |times: &[i64]| {
        let mut h = [0usize; GAP_BINS];
        for w in times.windows(2) {
            h[gap_bin(w[1] - w[0])] += 1;
        }
        entropy_bits(&h)
    };
    let cadence: Vec<i64> = (0..100).map(|i| 1_000 + 600 * i).collect();
    check!(hist(&cadence) == 0.0, "exact cadence gave {}", hist(&cadence));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let mut times = vec![0i64];
        for _ in 0..rng.random_range(1..150) {
            let digits = rng.random_range(1..8);
            let g = rng.random_range(0..10i64.pow(digits));
            times.push(times.last().unwrap() + g);
        }
        let (got, want) = (hist(&times), oracles::histogram_entropy(&times));
        check!(got == want, "case {case}: {got} vs {want}");
    }
    Ok("cadence 0 bits, 200 random series exact".into())
}

fn end_to_end() -> Outcome {
    let (ds, gt) = generate_challenge(&GeneratorConfig::default(), 42).map_err(|e| e.to_string())?;
    check!(ds.accounts.len() == 1000 && gt.bot_ids.len() == 39 && ds.duration_days == 28, "unexpected challenge shape");
    let cfg = CampaignConfig { noise: 0.0, budget: 120, seed: 42, ..CampaignConfig::default() };
    let run = || -> Result<_, String> {
        let mut s = Session::new(ds.clone(), WorkbenchConfig::default());
        s.attach_oracle(gt.clone()).map_err(|e| e.to_string())?;
        let report = campaign_auto(&mut s, &cfg).map_err(|e| e.to_string())?;
        let m = s.matrix().ok_or("no feature matrix")?;
        let det = s.detection().ok_or("no detection")?;
        let candidates: BTreeSet<u64> = det.candidate_ids(&m.user_ids).into_iter().collect();
        let recall = gt.bot_ids.intersection(&candidates).count() as f64 / gt.bot_ids.len() as f64;
        Ok((report, recall))
    };
    let (first, recall) = run()?;
    let (second, _) = run()?;
    let b = first.scoreboard;
    check!(b.hits == 39, "found {} of 39 bots", b.hits);
    check!(b.misses <= 10, "{} misses", b.misses);
    check!(b.speed > 0, "speed 0");
    check!(recall == 1.0, "outlier-candidate recall {recall}");
    let seq = |r: &bothunt_workbench::CampaignReport| r.guesses.iter().map(|g| g.user_id).collect::<Vec<_>>();
    check!(seq(&first) == seq(&second), "guess sequences differ between runs");
    Ok(format!("hits {} misses {} speed {} final {}, candidate recall {recall}", b.hits, b.misses, b.speed, b.final_score))
}

fn determinism() -> Outcome {
    let (ds, _) = generate_challenge(&GeneratorConfig::default(), 42).map_err(|e| e.to_string())?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    write_dataset(&ds, &a).map_err(|e| e.to_string())?;
    let loaded = load_dataset(&a).map_err(|e| e.to_string())?;
    check!(loaded == ds, "loaded dataset differs from generated");
    write_dataset(&loaded, &b).map_err(|e| e.to_string())?;
    for f in ["accounts.jsonl", "tweets.jsonl", "network.csv", "meta.json"] {
        let (x, y) = (std::fs::read(a.join(f)).map_err(|e| e.to_string())?, std::fs::read(b.join(f)).map_err(|e| e.to_string())?);
        check!(x == y, "{f} differs after a second write");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let bots: BTreeSet<u64> = (0..rng.random_range(1..10)).map(|_| rng.random_range(0..40)).collect();
        let mut c = ChallengeState::new(bots.iter().copied(), 20).map_err(|e| e.to_string())?;
        for _ in 0..60 {
            if rng.random_bool(0.2) {
                let _ = c.advance_day();
            } else {
                let _ = c.submit_guess(rng.random_range(0..40));
            }
        }
        check!(replay::<f64>(&c.ledger()) == c.scoreboard::<f64>(), "replayed scoreboard differs from live state");
    }
    Ok("byte-identical rewrite, 50 ledgers replay exactly".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("leaderboard scores reproduce exactly", 1, leaderboard),
        ("hedge weights follow the closed form", 1, hedge),
        ("density clustering matches brute force", 5, density_clustering),
        ("factorization is monotone and exact on planted rank", 10, factorization),
        ("pagerank and betweenness match oracles", 10, centrality),
        ("louvain recovers planted cliques", 1, communities),
        ("gap entropy matches brute force", 1, entropy),
        ("end-to-end campaign", 120, end_to_end),
        ("generation and scoring are deterministic", 30, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; but took {took:.2?}, limit {limit}s")),
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS {}. {name} ({took:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name} ({took:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
