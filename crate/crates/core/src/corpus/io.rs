//! On-disk dataset layout.
//!
//! ```text
//! <dir>/accounts.jsonl   one UserAccount per line
//! <dir>/tweets.jsonl     one Tweet per line
//! <dir>/network.csv      from_user,to_user,timestamp,weight
//! <dir>/meta.json        duration_days, start_time, topic_keywords
//! ```
//!
//! Ground truth is written separately so a detector pointed at the dataset
//! directory cannot read it.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::model::{Dataset, GroundTruth, NetworkEvent, Tweet, UserAccount};
use crate::error::{Error, Result};

pub const ACCOUNTS_FILE: &str = "accounts.jsonl";
pub const TWEETS_FILE: &str = "tweets.jsonl";
pub const NETWORK_FILE: &str = "network.csv";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Meta {
    duration_days: u32,
    start_time: i64,
    topic_keywords: Vec<String>,
}

/// A line that failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub file: String,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Keep going past malformed lines and return them alongside the dataset.
    pub lenient: bool,
}

/// Loads a dataset directory, failing on the first malformed line.
pub fn load_dataset(root: impl AsRef<Path>) -> Result<Dataset> {
    load_dataset_with(root, LoadOptions::default()).map(|(ds, _)| ds)
}

/// Loads a dataset directory. Every malformed line is collected; in strict
/// mode the first one is returned as a [`Error::Parse`] that also reports the
/// total count.
pub fn load_dataset_with(
    root: impl AsRef<Path>,
    opts: LoadOptions,
) -> Result<(Dataset, Vec<MalformedLine>)> {
    let root = root.as_ref();
    let mut malformed = Vec::new();

    let meta: Meta = {
        let path = require(root, META_FILE)?;
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            file: META_FILE.to_string(),
            line: e.line(),
            message: e.to_string(),
        })?
    };

    let accounts: Vec<UserAccount> = read_jsonl(&require(root, ACCOUNTS_FILE)?, ACCOUNTS_FILE, &mut malformed)?;
    let tweets: Vec<Tweet> = read_jsonl(&require(root, TWEETS_FILE)?, TWEETS_FILE, &mut malformed)?;
    let network_events = read_network(&require(root, NETWORK_FILE)?, &mut malformed)?;

    let mut seen = BTreeSet::new();
    for a in &accounts {
        if !seen.insert(a.user_id) {
            return Err(Error::DuplicateUser(a.user_id));
        }
    }

    if !opts.lenient {
        if let Some(first) = malformed.first() {
            let extra = malformed.len() - 1;
            return Err(Error::Parse {
                file: first.file.clone(),
                line: first.line,
                message: if extra > 0 {
                    format!("{} ({extra} more malformed lines)", first.message)
                } else {
                    first.message.clone()
                },
            });
        }
    }

    let ds = Dataset {
        accounts,
        tweets,
        network_events,
        duration_days: meta.duration_days,
        start_time: meta.start_time,
        topic_keywords: meta.topic_keywords,
    };
    Ok((ds, malformed))
}

fn require(root: &Path, name: &str) -> Result<PathBuf> {
    let p = root.join(name);
    if p.is_file() {
        Ok(p)
    } else {
        Err(Error::MissingFile(p))
    }
}

fn read_jsonl<T: DeserializeOwned>(
    path: &Path,
    name: &str,
    malformed: &mut Vec<MalformedLine>,
) -> Result<Vec<T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(v) => out.push(v),
            Err(e) => malformed.push(MalformedLine {
                file: name.to_string(),
                line: idx + 1,
                message: e.to_string(),
            }),
        }
    }
    Ok(out)
}

fn read_network(path: &Path, malformed: &mut Vec<MalformedLine>) -> Result<Vec<NetworkEvent>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let mut out = Vec::new();
    for rec in rdr.deserialize::<NetworkEvent>() {
        match rec {
            Ok(ev) => out.push(ev),
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                malformed.push(MalformedLine {
                    file: NETWORK_FILE.to_string(),
                    line,
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(out)
}

pub fn write_dataset(ds: &Dataset, root: impl AsRef<Path>) -> Result<()> {
    let root = root.as_ref();
    fs::create_dir_all(root)?;

    write_jsonl(&root.join(ACCOUNTS_FILE), &ds.accounts)?;
    write_jsonl(&root.join(TWEETS_FILE), &ds.tweets)?;

    let mut w = csv::Writer::from_path(root.join(NETWORK_FILE))?;
    if ds.network_events.is_empty() {
        w.write_record(["from_user", "to_user", "timestamp", "weight"])?;
    }
    for ev in &ds.network_events {
        w.serialize(ev)?;
    }
    w.flush()?;

    let meta = Meta {
        duration_days: ds.duration_days,
        start_time: ds.start_time,
        topic_keywords: ds.topic_keywords.clone(),
    };
    fs::write(root.join(META_FILE), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ground_truth(gt: &GroundTruth, path: impl AsRef<Path>) -> Result<()> {
    if let Some(parent) = path.as_ref().parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, serde_json::to_string_pretty(gt)? + "\n")?;
    Ok(())
}

pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::SECONDS_PER_DAY;

    fn tiny() -> Dataset {
        let acct = |id: u64| UserAccount {
            user_id: id,
            screen_name: format!("user{id}"),
            display_name: format!("User {id}"),
            bio: String::new(),
            profile_image_ref: String::new(),
            profile_url: String::new(),
            followers_count: 1,
            followings_count: 2,
            created_at: 0,
            sources: vec!["web".into()],
            active: true,
        };
        Dataset {
            accounts: vec![acct(1), acct(2), acct(3)],
            tweets: vec![Tweet {
                tweet_id: 10,
                user_id: 1,
                timestamp: 100,
                text: "hello #a".into(),
                hashtags: vec!["a".into()],
                mentions: vec![],
                urls: vec![],
                is_retweet: false,
                retweet_of: None,
                geo_enabled: false,
                language: "en".into(),
                url_text: None,
            }],
            network_events: vec![
                NetworkEvent { from_user: 1, to_user: 2, timestamp: 50, weight: 1 },
                NetworkEvent { from_user: 2, to_user: 99, timestamp: 60, weight: 0 },
            ],
            duration_days: 2,
            start_time: 0,
            topic_keywords: vec!["#a".into()],
        }
    }

    #[test]
    fn counts_match_lines() {
        let dir = tempfile::tempdir().unwrap();
        let ds = tiny();
        write_dataset(&ds, dir.path()).unwrap();
        let back = load_dataset(dir.path()).unwrap();
        assert_eq!(back.accounts.len(), 3);
        assert_eq!(back.tweets.len(), 1);
        assert_eq!(back.network_events.len(), 2);
        assert_eq!(back, ds);
        assert_eq!(back.end_time(), 2 * SECONDS_PER_DAY);
    }

    #[test]
    fn duplicate_user_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let mut ds = tiny();
        ds.accounts[2].user_id = 7;
        ds.accounts[1].user_id = 7;
        write_dataset(&ds, dir.path()).unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(matches!(err, Error::DuplicateUser(7)));
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn missing_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&tiny(), dir.path()).unwrap();
        fs::remove_file(dir.path().join(TWEETS_FILE)).unwrap();
        assert!(matches!(load_dataset(dir.path()), Err(Error::MissingFile(p)) if p.ends_with(TWEETS_FILE)));
    }

    #[test]
    fn malformed_lines_carry_line_numbers_and_are_collected() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&tiny(), dir.path()).unwrap();
        let path = dir.path().join(ACCOUNTS_FILE);
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{not json\n");
        fs::write(&path, text).unwrap();
        let mut net = fs::read_to_string(dir.path().join(NETWORK_FILE)).unwrap();
        net.push_str("1,x,5,1\n");
        fs::write(dir.path().join(NETWORK_FILE), net).unwrap();

        match load_dataset(dir.path()) {
            Err(Error::Parse { file, line, message }) => {
                assert_eq!(file, ACCOUNTS_FILE);
                assert_eq!(line, 4);
                assert!(message.contains("1 more"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        let (ds, bad) = load_dataset_with(dir.path(), LoadOptions { lenient: true }).unwrap();
        assert_eq!(ds.accounts.len(), 3);
        assert_eq!(bad.len(), 2);
        assert_eq!(bad[1].file, NETWORK_FILE);
        assert_eq!(bad[1].line, 4);
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&tiny(), dir.path()).unwrap();
        let path = dir.path().join(ACCOUNTS_FILE);
        let text = fs::read_to_string(&path).unwrap().replace("\"active\"", "\"lang\":\"en\",\"active\"");
        fs::write(&path, text).unwrap();
        assert_eq!(load_dataset(dir.path()).unwrap(), tiny());
    }
}
