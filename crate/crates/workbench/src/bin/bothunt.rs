use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bothunt_core::corpus::{generate_challenge, load_dataset, load_ground_truth, write_dataset, write_ground_truth, GeneratorConfig};
use bothunt_core::detect::{embed_and_cluster, finish_detection, DetectConfig};
use bothunt_core::features::{assemble_matrix, FeatureContext, FeatureMatrix, LabelContext, SentimentLexicon};
use bothunt_core::oracle::{replay, Ledger};
use bothunt_core::Scoreboard;
use bothunt_workbench::graphs::{edge_list, GraphKind};
use bothunt_workbench::{api, campaign_auto, Session, WorkbenchConfig};
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bothunt", version, about = "Generate bot-hunting challenges, extract features, detect and hunt bots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic challenge directory plus a separate ground-truth file.
    Generate {
        /// Generator settings as TOML; defaults apply to missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the ground truth; defaults to `truth.json` beside `--out`.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Compute the per-user feature matrix as CSV.
    Extract {
        #[arg(long)]
        data: PathBuf,
        /// Tab-separated `term weight` lexicon; the built-in one if omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "features.csv")]
        out: PathBuf,
    },
    /// Write one interaction graph as a `src dst weight` edge list.
    Graph {
        #[arg(long)]
        kind: GraphKind,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Factorize and density-cluster a feature matrix.
    Cluster {
        #[arg(long, default_value = "features.csv")]
        features: PathBuf,
        /// Neighbourhood radius, or `auto` to estimate it.
        #[arg(long, default_value = "auto")]
        eps: String,
        #[arg(long, default_value_t = 5)]
        min_pts: usize,
        #[arg(long, default_value_t = 8)]
        rank: usize,
        #[arg(long, default_value = "clusters.json")]
        out: PathBuf,
    },
    /// Rank outliers and list the outlier candidates with their groups.
    Outliers {
        #[arg(long, default_value = "features.csv")]
        features: PathBuf,
        #[arg(long, default_value_t = 8)]
        rank: usize,
        #[arg(long, default_value = "outliers.json")]
        out: PathBuf,
    },
    /// Recompute a scoreboard from a guess ledger.
    Score {
        #[arg(long)]
        ledger: PathBuf,
    },
    /// Run the automated hunt against the ground truth.
    Hunt {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Use the simulated analyst (required).
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Keep stage artifacts in this directory.
        #[arg(long)]
        session_dir: Option<PathBuf>,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Serve the workbench HTTP API.
    Serve {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

fn read_toml<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn workbench_config(path: Option<&Path>) -> Result<WorkbenchConfig> {
    match path {
        None => Ok(WorkbenchConfig::default()),
        Some(p) => Ok(WorkbenchConfig::load(p)?),
    }
}

fn read_matrix(path: &Path) -> Result<FeatureMatrix> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(FeatureMatrix::read_csv(f)?)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    fs::write(path, serde_json::to_vec_pretty(value)?).with_context(|| format!("writing {}", path.display()))
}

fn detect_config(rank: usize, eps: Option<f64>, min_pts: usize) -> DetectConfig {
    DetectConfig { nmf_rank: rank, eps, min_pts, ..DetectConfig::default() }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { config, seed, out, truth } => {
            let cfg: GeneratorConfig = read_toml(config.as_deref())?;
            let (ds, gt) = generate_challenge(&cfg, seed)?;
            write_dataset(&ds, &out)?;
            let truth = truth.unwrap_or_else(|| out.parent().unwrap_or(Path::new(".")).join("truth.json"));
            write_ground_truth(&gt, &truth)?;
            println!("{} accounts, {} tweets, {} follow events -> {}", ds.accounts.len(), ds.tweets.len(), ds.network_events.len(), out.display());
            println!("ground truth ({} bots) -> {}", gt.bot_ids.len(), truth.display());
        }
        Command::Extract { data, lexicon, config, out } => {
            let ds = load_dataset(&data)?;
            let cfg = workbench_config(config.as_deref())?;
            let lex = match lexicon {
                None => SentimentLexicon::default(),
                Some(p) => SentimentLexicon::parse(&fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?)?,
            };
            let ctx = FeatureContext::new(&ds, &lex, &cfg.features)?;
            let m = assemble_matrix(&ctx, &LabelContext::default());
            m.write_csv(fs::File::create(&out)?)?;
            println!("{} rows x {} columns -> {}", m.n_rows(), m.names.len(), out.display());
        }
        Command::Graph { kind, data, out } => {
            let ds = load_dataset(&data)?;
            let edges = edge_list(&ds, kind);
            fs::write(&out, &edges)?;
            println!("{} edges -> {}", edges.lines().count(), out.display());
        }
        Command::Cluster { features, eps, min_pts, rank, out } => {
            let m = read_matrix(&features)?;
            let eps = match eps.as_str() {
                "auto" => None,
                v => Some(v.parse::<f64>().with_context(|| format!("--eps must be a number or `auto`, got `{v}`"))?),
            };
            let cfg = detect_config(rank, eps, min_pts);
            let (_, clusters) = embed_and_cluster(m.label_free_z().view(), &cfg)?;
            let assignment: BTreeMap<String, Option<usize>> = m.user_ids.iter().map(|u| u.to_string()).zip(clusters.labels.iter().copied()).collect();
            write_json(
                &out,
                &json!({ "eps": clusters.eps, "min_pts": min_pts, "sizes": clusters.sizes(), "noise": clusters.noise().len(), "clusters": assignment }),
            )?;
            println!("{} clusters {:?}, {} noise -> {}", clusters.cluster_count(), clusters.sizes(), clusters.noise().len(), out.display());
        }
        Command::Outliers { features, rank, out } => {
            let m = read_matrix(&features)?;
            let cfg = detect_config(rank, None, DetectConfig::default().min_pts);
            let (embedding, clusters) = embed_and_cluster(m.label_free_z().view(), &cfg)?;
            let det = finish_detection(embedding, clusters, &m.user_ids, &cfg)?;
            let ranking: Vec<_> = det.outliers.ranking.iter().map(|(u, s)| json!({ "user_id": u, "score": s })).collect();
            write_json(&out, &json!({ "ranking": ranking, "candidates": det.candidate_ids(&m.user_ids), "groups": det.cluster_map }))?;
            println!("{} outlier candidates -> {}", det.candidates.len(), out.display());
        }
        Command::Score { ledger } => {
            let l = Ledger::load(&ledger)?;
            let board: Scoreboard = replay(&l);
            println!("{}", serde_json::to_string_pretty(&board)?);
        }
        Command::Hunt { data, truth, auto, noise, budget, config, session_dir, out } => {
            if !auto {
                bail!("hunt needs --auto; interactive hunting goes through `bothunt serve`");
            }
            let mut cfg = workbench_config(config.as_deref())?;
            if let Some(p) = noise {
                cfg.campaign.noise = p;
            }
            if let Some(b) = budget {
                cfg.campaign.budget = b;
            }
            let campaign = cfg.campaign.clone();
            let mut session = Session::new(load_dataset(&data)?, cfg);
            if let Some(dir) = session_dir {
                session = session.with_dir(dir)?;
            }
            session.attach_oracle(load_ground_truth(&truth)?)?;
            let report = campaign_auto(&mut session, &campaign)?;
            write_json(&out, &report)?;
            let b = &report.scoreboard;
            println!(
                "hits {} misses {} accuracy {} speed {} final {} (day {}) -> {}",
                b.hits, b.misses, b.accuracy, b.speed, b.final_score, report.final_day, out.display()
            );
        }
        Command::Serve { data, truth, config, bind } => {
            let mut session = Session::new(load_dataset(&data)?, workbench_config(config.as_deref())?);
            if let Some(t) = truth {
                session.attach_oracle(load_ground_truth(&t)?)?;
            }
            session.ensure_stage(bothunt_workbench::Stage::Features)?;
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on {bind}");
            rt.block_on(api::serve(session, &bind))?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
