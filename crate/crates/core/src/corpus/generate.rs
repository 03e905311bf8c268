//! Synthetic influence-bot challenge.
//!
//! Humans tweet with log-normal gaps bent around a daily activity curve,
//! carry persona-centred sentiment and mostly complete profiles. Bots come
//! from three "programs", each sharing template parameters with per-bot
//! jitter:
//!
//! * amplifiers post templated pro-topic content in long fixed-cadence bursts
//!   and churn their follow lists,
//! * infiltrators post anti-topic content until `flip_day`, then pro-topic,
//! * ring bots follow each other and mostly retweet ring members.
//!
//! Every family reuses a small pool of stock profile images and a cloned
//! profile URL, and gets word+digits screen names.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

use super::model::{
    Dataset, GeneratorConfig, GroundTruth, NetworkEvent, Tweet, UserAccount, SECONDS_PER_DAY,
};
use crate::error::{Error, Result};
use crate::text::extract_entities;

pub const TOPIC_KEYWORDS: &[&str] = &["#vaccines", "#vaxfacts", "vaccine", "vaccines", "vaccination", "measles"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Amplifier,
    Infiltrator,
    Ring,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Amplifier => "amplifier",
            Family::Infiltrator => "infiltrator",
            Family::Ring => "ring",
        }
    }

    /// Seconds between posts, window start hour, window length in hours.
    fn cadence(self) -> (f64, f64, f64) {
        match self {
            Family::Amplifier => (180.0, 13.0, 4.0),
            Family::Infiltrator => (1_500.0, 8.0, 12.0),
            Family::Ring => (2_900.0, 6.0, 16.0),
        }
    }

    /// Uniform jitter half-width applied to every gap.
    fn jitter(self) -> f64 {
        match self {
            Family::Amplifier => 15.0,
            Family::Infiltrator => 60.0,
            Family::Ring => 100.0,
        }
    }
}

const FIRST_NAMES: &[&str] = &[
    "Carrie", "Susan", "Rhonda", "Mildred", "Nicole", "Janette", "Zoey", "Amos", "Linda", "Kevin", "Maria",
    "James", "Robert", "Patricia", "Jennifer", "Michael", "Elizabeth", "David", "Barbara", "Richard",
    "Joseph", "Thomas", "Sarah", "Karen", "Nancy", "Daniel", "Lisa", "Matthew", "Betty", "Anthony",
    "Sandra", "Mark", "Ashley", "Steven", "Emily", "Andrew", "Donna", "Joshua", "Michelle", "Brian",
    "Amanda", "Oscar", "Melissa", "Edward", "Deborah", "Ronald", "Laura", "Timothy", "Rebecca", "Jason",
    "Sharon", "Jeffrey", "Cynthia", "Ryan", "Kathleen", "Jacob", "Helen", "Gary", "Amy", "Nicholas",
];

const LAST_NAMES: &[&str] = &[
    "Woolf", "Eastwood", "Granger", "Mason", "George", "Sohm", "Perrington", "Smith", "Johnson", "Brown",
    "Garcia", "Miller", "Davis", "Rodriguez", "Martinez", "Hernandez", "Lopez", "Wilson", "Anderson",
    "Taylor", "Moore", "Jackson", "Martin", "Lee", "Thompson", "White", "Harris", "Clark", "Lewis",
    "Robinson", "Walker", "Young", "Allen", "King", "Wright", "Scott", "Torres", "Nguyen", "Hill",
    "Flores", "Green", "Adams", "Nelson", "Baker", "Hall", "Rivera", "Campbell", "Mitchell", "Carter",
];

/// Stems for bot handles; disjoint from the personal names above.
const HANDLE_WORDS: &[&str] = &[
    "sunny", "bluesky", "quickfox", "truthy", "daily", "brightday", "sparkle", "wavey", "pixel", "cloudy",
    "ember", "topaz", "velvet", "harbor", "meadow", "zephyr", "cobalt", "quartz", "willow", "breeze",
];

const GENERAL_WORDS: &[&str] = &[
    "today", "morning", "coffee", "work", "weekend", "game", "music", "friends", "family", "dinner",
    "movie", "road", "trip", "city", "weather", "rain", "sun", "news", "book", "reading", "school",
    "kids", "dog", "cat", "garden", "running", "gym", "lunch", "office", "meeting", "train", "bus",
    "traffic", "pizza", "tacos", "beach", "park", "night", "sleep", "show", "season", "team", "win",
    "lost", "score", "playlist", "concert", "tickets", "church", "sunday", "monday", "friday", "home",
    "house", "kitchen", "recipe", "bake", "cookies", "photo", "picture", "phone", "laptop", "internet",
    "update", "video", "podcast", "episode", "finally", "really", "maybe", "honestly", "literally",
    "just", "still", "again", "always", "never", "everyone", "somebody", "nobody", "tomorrow", "tonight",
    "yesterday", "week", "month", "year", "birthday", "party", "wedding", "baby", "mom", "dad", "sister",
    "brother", "cousin", "neighbor", "boss", "job", "money", "rent", "bills", "shopping", "store",
];

const GENERAL_TAGS: &[&str] = &["coffee", "monday", "nfl", "music", "tbt", "food", "travel", "news", "photo", "weekend"];
const PRO_TAGS: &[&str] = &["vaxfacts", "vaccineswork", "provax", "immunization"];
const ANTI_TAGS: &[&str] = &["cdcwhistleblower", "vaxtruth", "learntherisk", "antivax"];

const POS_WORDS: &[&str] = &["save", "lives", "safe", "protect", "effective", "trust", "science", "healthy", "grateful", "good"];
const NEG_WORDS: &[&str] = &["dangerous", "toxic", "harm", "poison", "risky", "scam", "lies", "injury", "fear", "sick"];
const TOPIC_NOUNS: &[&str] = &["vaccines", "vaccine", "vaccination", "measles", "shots", "doctors"];

const AMPLIFIER_OPENINGS: &[&str] = &["I think that", "Did you know", "Remember that"];
const INFILTRATOR_OPENINGS: &[&str] = &["People should know", "Why is nobody", "Ask yourself why", "Wake up people"];
const RING_OPENINGS: &[&str] = &["Good news everyone", "Please share this", "Read this now"];

const SOURCES: &[&str] = &["iphone", "android", "web", "ipad", "tweetdeck"];
const END_PUNCT: &[&str] = &["", "", ".", "!", "?", "..."];
const LANGS_EXTRA: &[&str] = &["es", "fr", "de", "pt"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Persona {
    Pro,
    Anti,
    Neutral,
}

struct HumanParams {
    rate: f64,
    persona: Persona,
    topic_fraction: f64,
    languages: Vec<&'static str>,
    geo: bool,
}

struct BotParams {
    family: Family,
    cadence: f64,
    window_start_h: f64,
}

enum Role {
    Human(HumanParams),
    Bot(BotParams),
}

fn check_config(cfg: &GeneratorConfig) -> Result<()> {
    if cfg.n_bots > cfg.n_users {
        return Err(Error::InvalidConfig(format!("n_bots {} exceeds n_users {}", cfg.n_bots, cfg.n_users)));
    }
    let m = cfg.family_mix;
    let parts = [m.amplifier, m.infiltrator, m.ring];
    if parts.iter().any(|p| !p.is_finite() || *p < 0.0) || ((parts.iter().sum::<f64>()) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig("family_mix must be non-negative and sum to 1".into()));
    }
    if cfg.duration_days == 0 {
        return Err(Error::InvalidConfig("duration_days must be positive".into()));
    }
    if cfg.flip_day > cfg.duration_days {
        return Err(Error::InvalidConfig("flip_day lies outside the challenge".into()));
    }
    if !(0.0..=1.0).contains(&cfg.network_only_fraction) {
        return Err(Error::InvalidConfig("network_only_fraction must be in [0, 1]".into()));
    }
    if cfg.human_tweets_per_day <= 0.0 || cfg.human_rate_sigma < 0.0 {
        return Err(Error::InvalidConfig("human tweet-rate parameters must be positive".into()));
    }
    Ok(())
}

/// Family sizes by largest remainder, ties to the earlier family.
fn family_counts(cfg: &GeneratorConfig) -> [(Family, usize); 3] {
    let m = cfg.family_mix;
    let fams = [(Family::Amplifier, m.amplifier), (Family::Infiltrator, m.infiltrator), (Family::Ring, m.ring)];
    let n = cfg.n_bots as f64;
    let mut counts: Vec<(Family, usize, f64)> =
        fams.iter().map(|&(f, p)| (f, (p * n).floor() as usize, p * n - (p * n).floor())).collect();
    let mut left = cfg.n_bots - counts.iter().map(|c| c.1).sum::<usize>();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| counts[b].2.partial_cmp(&counts[a].2).unwrap().then(a.cmp(&b)));
    for i in order {
        if left == 0 {
            break;
        }
        counts[i].1 += 1;
        left -= 1;
    }
    [(counts[0].0, counts[0].1), (counts[1].0, counts[1].1), (counts[2].0, counts[2].1)]
}

/// Generates a challenge and its ground truth. Deterministic in `(cfg, seed)`;
/// `seed` overrides `cfg.seed` and is echoed in the ground truth.
pub fn generate_challenge(cfg: &GeneratorConfig, seed: u64) -> Result<(Dataset, GroundTruth)> {
    check_config(cfg)?;
    let mut cfg = cfg.clone();
    cfg.seed = seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n_users;

    // Twitter-like ids: distinct, sorted, sparse.
    let mut ids = BTreeSet::new();
    while ids.len() < n {
        ids.insert(2_800_000_000u64 + rng.random_range(0..200_000_000u64));
    }
    let ids: Vec<u64> = ids.into_iter().collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut bot_slots: Vec<usize> = order[..cfg.n_bots].to_vec();
    bot_slots.sort_unstable();

    let mut family_of: BTreeMap<u64, String> = BTreeMap::new();
    let mut fam_members: BTreeMap<Family, Vec<usize>> = BTreeMap::new();
    {
        let mut shuffled = bot_slots.clone();
        shuffled.shuffle(&mut rng);
        let mut it = shuffled.into_iter();
        for (fam, count) in family_counts(&cfg) {
            for _ in 0..count {
                let slot = it.next().expect("family counts sum to n_bots");
                family_of.insert(ids[slot], fam.name().to_string());
                fam_members.entry(fam).or_default().push(slot);
            }
        }
        for v in fam_members.values_mut() {
            v.sort_unstable();
        }
    }
    let slot_family: BTreeMap<usize, Family> = fam_members
        .iter()
        .flat_map(|(&f, slots)| slots.iter().map(move |&s| (s, f)))
        .collect();

    // Family-level template parameters.
    let fam_window: BTreeMap<Family, f64> = [Family::Amplifier, Family::Infiltrator, Family::Ring]
        .into_iter()
        .map(|f| (f, f.cadence().1 + rng.random_range(-1.0..1.0)))
        .collect();
    let fam_images: BTreeMap<Family, Vec<String>> = [Family::Amplifier, Family::Infiltrator, Family::Ring]
        .into_iter()
        .map(|f| {
            let pool = (0..3).map(|k| format!("stock_{:08x}_{k}", rng.random::<u32>())).collect();
            (f, pool)
        })
        .collect();
    let fam_site: BTreeMap<Family, String> = [Family::Amplifier, Family::Infiltrator, Family::Ring]
        .into_iter()
        .map(|f| (f, format!("{}{}.com", HANDLE_WORDS.choose(&mut rng).unwrap(), rng.random_range(10..99))))
        .collect();

    let rate_dist = LogNormal::new(cfg.human_tweets_per_day.ln(), cfg.human_rate_sigma).expect("valid lognormal");
    let mut roles = Vec::with_capacity(n);
    for slot in 0..n {
        if let Some(&family) = slot_family.get(&slot) {
            let (cad, _, _) = family.cadence();
            roles.push(Role::Bot(BotParams {
                family,
                cadence: cad * rng.random_range(0.95..1.05),
                window_start_h: fam_window[&family] + rng.random_range(-0.5..0.5),
            }));
        } else {
            let persona = match rng.random_range(0..100) {
                0..35 => Persona::Pro,
                35..60 => Persona::Anti,
                _ => Persona::Neutral,
            };
            let mut languages = vec!["en"];
            let r = rng.random_range(0..100);
            if r < 10 {
                languages.push(LANGS_EXTRA.choose(&mut rng).unwrap());
            } else if r < 12 {
                languages.extend_from_slice(&["fr", "de"]);
            }
            roles.push(Role::Human(HumanParams {
                rate: rate_dist.sample(&mut rng).clamp(0.2, 60.0),
                persona,
                topic_fraction: rng.random_range(0.05..0.5),
                languages,
                geo: rng.random_bool(0.3),
            }));
        }
    }

    // Profiles.
    let mut accounts = Vec::with_capacity(n);
    let mut used_names = BTreeSet::new();
    let shared_meme: Vec<String> = (0..4).map(|k| format!("img_meme_{k}")).collect();
    for slot in 0..n {
        let first = *FIRST_NAMES.choose(&mut rng).unwrap();
        let last = *LAST_NAMES.choose(&mut rng).unwrap();
        let (mut screen, display, bio, image, url, sources, created_at) = match &roles[slot] {
            Role::Human(h) => {
                let screen = match rng.random_range(0..100) {
                    0..40 => format!("{first}{last}"),
                    40..60 => format!("{}_{}", first.to_lowercase(), last.to_lowercase()),
                    60..75 => format!("{first}{}{last}", (b'A' + rng.random_range(0..26u8)) as char),
                    75..92 => format!("{first}{}", rng.random_range(10..99)),
                    92..97 => last.to_string(),
                    // handles unrelated to the display name
                    _ => format!("{}{}", HANDLE_WORDS.choose(&mut rng).unwrap(), rng.random_range(100..999)),
                };
                let display = format!("{first} {last}");
                let bio = if rng.random_bool(0.8) { human_bio(&mut rng, h.persona) } else { String::new() };
                let image = match rng.random_range(0..100) {
                    0..4 => String::new(),
                    4..6 => shared_meme.choose(&mut rng).unwrap().clone(),
                    _ => format!("img_{:016x}", rng.random::<u64>()),
                };
                let url = if rng.random_bool(0.35) {
                    format!("http://{}{}.blog/", first.to_lowercase(), rng.random_range(1000..9999))
                } else {
                    String::new()
                };
                let k = rng.random_range(1..=3);
                let mut sources: Vec<String> = SOURCES.choose_multiple(&mut rng, k).map(|s| s.to_string()).collect();
                if rng.random_bool(0.1) {
                    sources.push("null".into());
                }
                let created = cfg.start_time - rng.random_range(200..3000) * SECONDS_PER_DAY;
                (screen, display, bio, image, url, sources, created)
            }
            Role::Bot(b) => {
                let display = format!("{first} {last}");
                let mut stem = *HANDLE_WORDS.choose(&mut rng).unwrap();
                while shares_trigram(stem, &display) {
                    stem = HANDLE_WORDS.choose(&mut rng).unwrap();
                }
                let screen = format!("{stem}{}", rng.random_range(1_000..99_999));
                let bio = if rng.random_bool(0.5) {
                    String::new()
                } else {
                    format!("{} {} #{}", POS_WORDS.choose(&mut rng).unwrap(), GENERAL_WORDS.choose(&mut rng).unwrap(), PRO_TAGS.choose(&mut rng).unwrap())
                };
                let image = fam_images[&b.family].choose(&mut rng).unwrap().clone();
                let site = &fam_site[&b.family];
                // cloned landing page with cosmetic variations
                let url = match rng.random_range(0..3) {
                    0 => format!("http://www.{site}/"),
                    1 => format!("https://{site}"),
                    _ => format!("http://{}", site.to_uppercase()),
                };
                let sources = if rng.random_bool(0.5) { vec!["null".to_string()] } else { vec!["bot_api".to_string()] };
                let created = cfg.start_time - rng.random_range(20..120) * SECONDS_PER_DAY;
                (screen, display, bio, image, url, sources, created)
            }
        };
        while !used_names.insert(screen.to_lowercase()) {
            screen.push(char::from(b'0' + rng.random_range(0..10u8)));
        }
        accounts.push(UserAccount {
            user_id: ids[slot],
            screen_name: screen,
            display_name: display,
            bio,
            profile_image_ref: image,
            profile_url: url,
            followers_count: 0,
            followings_count: 0,
            created_at,
            sources,
            active: true,
        });
    }

    let network_events = generate_network(&cfg, &mut rng, &ids, &roles, &fam_members);
    let mut tweets = generate_tweets(&cfg, &mut rng, &ids, &roles, &accounts, &fam_members);

    tweets.sort_by_key(|t| (t.timestamp, t.user_id));
    for (i, t) in tweets.iter_mut().enumerate() {
        t.tweet_id = 560_000_000_000_000_000 + i as u64;
    }

    let mut ds = Dataset {
        accounts,
        tweets,
        network_events,
        duration_days: cfg.duration_days,
        start_time: cfg.start_time,
        topic_keywords: TOPIC_KEYWORDS.iter().map(|s| s.to_string()).collect(),
    };

    let final_graph = super::snapshot::network_snapshot(&ds, ds.duration_days)?;
    let indeg = final_graph.in_degrees();
    let outdeg = final_graph.out_degrees();
    for a in &mut ds.accounts {
        a.followers_count = indeg.get(&a.user_id).copied().unwrap_or(0) as u64;
        a.followings_count = outdeg.get(&a.user_id).copied().unwrap_or(0) as u64;
        // a handful of humans went quiet
        if a.user_id % 97 == 0 && !family_of.contains_key(&a.user_id) {
            a.active = false;
        }
    }

    let truth = GroundTruth {
        bot_ids: family_of.keys().copied().collect(),
        family_of,
        seed,
        config: cfg,
    };
    Ok((ds, truth))
}

fn shares_trigram(stem: &str, display: &str) -> bool {
    display.split([' ', '_']).any(|part| {
        let p = part.to_lowercase();
        p.as_bytes().windows(3).any(|w| stem.contains(std::str::from_utf8(w).unwrap_or("")))
    })
}

fn human_bio(rng: &mut ChaCha8Rng, persona: Persona) -> String {
    let mut words: Vec<&str> = GENERAL_WORDS.choose_multiple(rng, 4).copied().collect();
    match persona {
        Persona::Pro if rng.random_bool(0.4) => words.push("science"),
        Persona::Anti if rng.random_bool(0.4) => words.push("truth"),
        _ => {}
    }
    words.join(" ")
}

fn generate_network(
    cfg: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
    ids: &[u64],
    roles: &[Role],
    fam_members: &BTreeMap<Family, Vec<usize>>,
) -> Vec<NetworkEvent> {
    let n = ids.len();
    let start = cfg.start_time;
    let span = i64::from(cfg.duration_days) * SECONDS_PER_DAY;
    let mut events = Vec::new();
    let humans: Vec<usize> = (0..n).filter(|&s| matches!(roles[s], Role::Human(_))).collect();
    let bots: Vec<usize> = (0..n).filter(|&s| matches!(roles[s], Role::Bot(_))).collect();

    // popularity skews who gets followed
    let popularity: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * 3.0).exp()).collect();
    let total_pop: f64 = humans.iter().map(|&h| popularity[h]).sum();
    let pick_human = |rng: &mut ChaCha8Rng| -> usize {
        let mut x = rng.random::<f64>() * total_pop;
        for &h in &humans {
            x -= popularity[h];
            if x <= 0.0 {
                return h;
            }
        }
        *humans.last().unwrap()
    };

    for &h in &humans {
        let k = rng.random_range(5..40);
        let mut followed = BTreeSet::new();
        for _ in 0..k {
            let t = if humans.len() > 1 { pick_human(rng) } else { h };
            if t != h && followed.insert(t) {
                events.push(NetworkEvent { from_user: ids[h], to_user: ids[t], timestamp: start, weight: 1 });
            }
        }
        // slow drift during the challenge
        for _ in 0..rng.random_range(0..4) {
            let t = pick_human(rng);
            if t == h {
                continue;
            }
            let ts = start + rng.random_range(1..span);
            events.push(NetworkEvent { from_user: ids[h], to_user: ids[t], timestamp: ts, weight: 1 });
        }
        if !followed.is_empty() && rng.random_bool(0.3) {
            let list: Vec<usize> = followed.iter().copied().collect();
            let t = *list.choose(rng).unwrap();
            let ts = start + rng.random_range(1..span);
            events.push(NetworkEvent { from_user: ids[h], to_user: ids[t], timestamp: ts, weight: 0 });
        }
        // rare human follows of bots
        if !bots.is_empty() && rng.random_bool(0.05) {
            let b = *bots.choose(rng).unwrap();
            events.push(NetworkEvent { from_user: ids[h], to_user: ids[b], timestamp: start + rng.random_range(1..span), weight: 1 });
        }
    }

    for (&family, members) in fam_members {
        for &b in members {
            // bots inflate each other's follower counts
            let mut others: Vec<usize> = bots.iter().copied().filter(|&o| o != b).collect();
            others.shuffle(rng);
            let cross = rng.random_range(3..7).min(others.len());
            for &o in &others[..cross] {
                events.push(NetworkEvent { from_user: ids[b], to_user: ids[o], timestamp: start + rng.random_range(0..SECONDS_PER_DAY), weight: 1 });
            }
            if family == Family::Ring {
                for &o in members {
                    if o != b {
                        events.push(NetworkEvent { from_user: ids[b], to_user: ids[o], timestamp: start, weight: 1 });
                    }
                }
            }
            for _ in 0..rng.random_range(10..30) {
                let h = pick_human(rng);
                let ts = start + rng.random_range(0..span / 2);
                events.push(NetworkEvent { from_user: ids[b], to_user: ids[h], timestamp: ts, weight: 1 });
                // amplifiers follow-churn
                if family == Family::Amplifier && rng.random_bool(0.7) {
                    let later = ts + rng.random_range(SECONDS_PER_DAY..4 * SECONDS_PER_DAY);
                    events.push(NetworkEvent { from_user: ids[b], to_user: ids[h], timestamp: later.min(start + span), weight: 0 });
                }
            }
        }
    }

    // ids present only in the follow log
    let extra = (cfg.network_only_fraction * n as f64).round() as usize;
    let max_id = ids.last().copied().unwrap_or(2_800_000_000);
    for k in 0..extra {
        let ghost = max_id + 1 + k as u64 * 13;
        if humans.is_empty() {
            break;
        }
        for _ in 0..rng.random_range(1..6) {
            let h = pick_human(rng);
            let ts = start + rng.random_range(0..span);
            events.push(NetworkEvent { from_user: ghost, to_user: ids[h], timestamp: ts, weight: 1 });
        }
        if rng.random_bool(0.5) {
            let h = pick_human(rng);
            events.push(NetworkEvent { from_user: ids[h], to_user: ghost, timestamp: start, weight: 1 });
        }
    }

    events.sort_by_key(|e| (e.timestamp, e.from_user, e.to_user, e.weight));
    events
}

struct TweetDraft {
    text: String,
    retweet_of: Option<u64>,
    language: &'static str,
    url_text: Option<String>,
}

fn sentiment_phrase(rng: &mut ChaCha8Rng, positive: bool, strength: usize) -> String {
    let pool = if positive { POS_WORDS } else { NEG_WORDS };
    pool.choose_multiple(rng, strength).copied().collect::<Vec<_>>().join(" ")
}

fn human_tweet(rng: &mut ChaCha8Rng, h: &HumanParams, accounts: &[UserAccount]) -> TweetDraft {
    let language = if h.languages.len() > 1 && rng.random_bool(0.25) {
        *h.languages[1..].choose(rng).unwrap()
    } else {
        "en"
    };
    if rng.random_bool(0.12) && !accounts.is_empty() {
        let src = accounts.choose(rng).unwrap();
        let body: Vec<&str> = GENERAL_WORDS.choose_multiple(rng, 6).copied().collect();
        return TweetDraft {
            text: format!("RT @{}: {}", src.screen_name, body.join(" ")),
            retweet_of: Some(src.user_id),
            language,
            url_text: None,
        };
    }

    let len = rng.random_range(5..12);
    let mut words: Vec<String> = GENERAL_WORDS
        .choose_multiple(rng, len)
        .map(|s| s.to_string())
        .collect();
    let topical = rng.random_bool(h.topic_fraction);
    let mut tags: Vec<String> = Vec::new();
    if topical {
        words.insert(rng.random_range(0..words.len()), TOPIC_NOUNS.choose(rng).unwrap().to_string());
        let (positive, strength) = match h.persona {
            Persona::Pro => (rng.random_bool(0.9), rng.random_range(1..3)),
            Persona::Anti => (rng.random_bool(0.1), rng.random_range(1..3)),
            Persona::Neutral => (rng.random_bool(0.5), usize::from(rng.random_bool(0.3))),
        };
        if strength > 0 {
            let phrase = sentiment_phrase(rng, positive, strength);
            words.insert(rng.random_range(0..words.len()), phrase);
        }
        if rng.random_bool(0.5) {
            tags.push("#vaccines".into());
            let pool = if h.persona == Persona::Anti { ANTI_TAGS } else { PRO_TAGS };
            if rng.random_bool(0.5) {
                tags.push(format!("#{}", pool.choose(rng).unwrap()));
            }
        }
    } else if rng.random_bool(0.2) {
        tags.push(format!("#{}", GENERAL_TAGS.choose(rng).unwrap()));
    }
    if rng.random_bool(0.15) && !accounts.is_empty() {
        let who = accounts.choose(rng).unwrap();
        words.insert(rng.random_range(0..words.len()), format!("@{}", who.screen_name));
    }
    // vary the opening so templates do not repeat
    words.shuffle(rng);
    let mut text = words.join(" ");
    text.push_str(END_PUNCT.choose(rng).unwrap());
    let mut url_text = None;
    if rng.random_bool(0.1) {
        text.push_str(&format!(" http://t.co/{:08x}", rng.random::<u32>()));
        let page: Vec<&str> = GENERAL_WORDS.choose_multiple(rng, 8).copied().collect();
        url_text = Some(page.join(" "));
    }
    for t in tags {
        text.push(' ');
        text.push_str(&t);
    }
    TweetDraft { text, retweet_of: None, language, url_text }
}

fn bot_tweet(
    rng: &mut ChaCha8Rng,
    b: &BotParams,
    day: u32,
    cfg: &GeneratorConfig,
    ring: &[(u64, String)],
    self_id: u64,
) -> TweetDraft {
    match b.family {
        Family::Amplifier => {
            let opening = AMPLIFIER_OPENINGS.choose(rng).unwrap();
            let noun = TOPIC_NOUNS.choose(rng).unwrap();
            let phrase = sentiment_phrase(rng, true, 2);
            let t1 = PRO_TAGS.choose(rng).unwrap();
            let mut text = format!("{opening} {noun} {phrase} #vaxfacts #{t1}");
            let mut url_text = None;
            if rng.random_bool(0.5) {
                text = format!("{opening} {noun} {phrase} http://bit.ly/{:06x} #vaxfacts #{t1}", rng.random::<u32>() & 0xff_ffff);
                // spurious landing page
                url_text = Some(format!("{} {} deals today", NEG_WORDS.choose(rng).unwrap(), GENERAL_WORDS.choose(rng).unwrap()));
            }
            TweetDraft { text, retweet_of: None, language: "en", url_text }
        }
        Family::Infiltrator => {
            let opening = INFILTRATOR_OPENINGS.choose(rng).unwrap();
            let noun = TOPIC_NOUNS.choose(rng).unwrap();
            let pro = day >= cfg.flip_day;
            let phrase = sentiment_phrase(rng, pro, 2);
            let tag = if pro { PRO_TAGS.choose(rng).unwrap() } else { ANTI_TAGS.choose(rng).unwrap() };
            TweetDraft {
                text: format!("{opening} {noun} are {phrase} #vaccines #{tag}"),
                retweet_of: None,
                language: "en",
                url_text: None,
            }
        }
        Family::Ring => {
            let others: Vec<&(u64, String)> = ring.iter().filter(|(id, _)| *id != self_id).collect();
            if !others.is_empty() && rng.random_bool(0.7) {
                let (id, name) = others.choose(rng).unwrap();
                let noun = TOPIC_NOUNS.choose(rng).unwrap();
                let phrase = sentiment_phrase(rng, true, 1);
                return TweetDraft {
                    text: format!("RT @{name}: {noun} {phrase} #vaccineswork"),
                    retweet_of: Some(*id),
                    language: "en",
                    url_text: None,
                };
            }
            let opening = RING_OPENINGS.choose(rng).unwrap();
            let noun = TOPIC_NOUNS.choose(rng).unwrap();
            let phrase = sentiment_phrase(rng, true, 2);
            TweetDraft {
                text: format!("{opening} {noun} {phrase} #vaccines #vaccineswork"),
                retweet_of: None,
                language: "en",
                url_text: None,
            }
        }
    }
}

fn generate_tweets(
    cfg: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
    ids: &[u64],
    roles: &[Role],
    accounts: &[UserAccount],
    fam_members: &BTreeMap<Family, Vec<usize>>,
) -> Vec<Tweet> {
    let start = cfg.start_time;
    let end = start + i64::from(cfg.duration_days) * SECONDS_PER_DAY;
    let humans: Vec<UserAccount> = accounts
        .iter()
        .enumerate()
        .filter(|(s, _)| matches!(roles[*s], Role::Human(_)))
        .map(|(_, a)| a.clone())
        .collect();
    let ring: Vec<(u64, String)> = fam_members
        .get(&Family::Ring)
        .map(|m| m.iter().map(|&s| (ids[s], accounts[s].screen_name.clone())).collect())
        .unwrap_or_default();
    let gap_noise = Normal::new(0.0, 1.2).expect("valid normal");

    let mut out = Vec::new();
    for (slot, role) in roles.iter().enumerate() {
        let uid = ids[slot];
        let mut push = |ts: i64, d: TweetDraft, geo: bool| {
            let e = extract_entities(&d.text);
            out.push(Tweet {
                tweet_id: 0,
                user_id: uid,
                timestamp: ts,
                is_retweet: d.retweet_of.is_some(),
                retweet_of: d.retweet_of,
                hashtags: e.hashtags,
                mentions: e.mentions,
                urls: e.urls,
                text: d.text,
                geo_enabled: geo,
                language: d.language.to_string(),
                url_text: d.url_text,
            });
        };
        match role {
            Role::Human(h) => {
                let mean_gap = SECONDS_PER_DAY as f64 / h.rate;
                let mu = mean_gap.ln() - 0.72;
                let mut t = start as f64 + rng.random::<f64>() * mean_gap;
                while (t as i64) < end {
                    let ts = t as i64;
                    let hour = ((ts - start).rem_euclid(SECONDS_PER_DAY)) as f64 / 3600.0;
                    if (1.0..7.0).contains(&hour) && rng.random_bool(0.85) {
                        // pushed into the morning by the activity curve
                        let day_start = ts - (ts - start).rem_euclid(SECONDS_PER_DAY);
                        t = (day_start + 7 * 3600) as f64 + rng.random::<f64>() * 7200.0;
                        continue;
                    }
                    let draft = human_tweet(rng, h, &humans);
                    push(ts, draft, h.geo);
                    t += (mu + gap_noise.sample(rng)).exp().max(1.0);
                }
            }
            Role::Bot(b) => {
                let (_, _, window_h) = b.family.cadence();
                let jitter = b.family.jitter();
                for day in 0..cfg.duration_days {
                    let day_start = start + i64::from(day) * SECONDS_PER_DAY;
                    let win_start = day_start as f64 + b.window_start_h * 3600.0;
                    let win_end = win_start + window_h * 3600.0;
                    let mut t = win_start;
                    while t < win_end {
                        let ts = t as i64;
                        if ts >= end {
                            break;
                        }
                        let draft = bot_tweet(rng, b, day, cfg, &ring, uid);
                        push(ts, draft, false);
                        t += b.cadence + rng.random_range(-jitter..jitter);
                    }
                }
            }
        }
    }
    out
}
