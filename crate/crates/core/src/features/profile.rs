use std::collections::{BTreeMap, BTreeSet};

use super::FeatureValues;
use crate::corpus::{Dataset, Tweet, UserAccount};
use crate::text::words;

/// `|A ∩ B| / |A ∪ B|`, with two empty sets counted as identical.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Lowercase, drop the scheme, a leading `www.` and any trailing slash.
pub fn normalize_url(url: &str) -> String {
    let u = url.trim().to_lowercase();
    let u = u.strip_prefix("https://").or_else(|| u.strip_prefix("http://")).unwrap_or(&u);
    let u = u.strip_prefix("www.").unwrap_or(u);
    u.trim_end_matches('/').to_string()
}

fn shares_substring3(a: &str, b: &str) -> bool {
    a.as_bytes().windows(3).any(|w| b.as_bytes().windows(3).any(|v| v == w))
}

/// Mean of three binary cues: digits make up at least 30% of the screen
/// name; the screen name is letters followed by two or more digits; no
/// screen-name part shares a 3-character substring with any display-name
/// part.
pub fn name_autogen_score(screen_name: &str, display_name: &str) -> f64 {
    let chars: Vec<char> = screen_name.chars().collect();
    let digits = chars.iter().filter(|c| c.is_ascii_digit()).count();
    let digit_heavy = !chars.is_empty() && digits as f64 / chars.len() as f64 >= 0.3;

    let letters = chars.iter().take_while(|c| c.is_ascii_alphabetic()).count();
    let word_digits = letters > 0 && chars.len() - letters >= 2 && chars[letters..].iter().all(|c| c.is_ascii_digit());

    let screen_parts: Vec<String> = screen_name.split('_').map(str::to_lowercase).collect();
    let display_parts: Vec<String> = display_name.split([' ', '_']).map(str::to_lowercase).collect();
    let unrelated = !screen_parts.iter().any(|s| display_parts.iter().any(|d| shares_substring3(s, d)));

    f64::from(u8::from(digit_heavy) + u8::from(word_digits) + u8::from(unrelated)) / 3.0
}

/// Token bag used for profile similarity: bio and display-name words, the
/// alphabetic stem of the screen name, image id, normalized url and sources.
pub fn profile_tokens(account: &UserAccount) -> BTreeSet<String> {
    let mut toks: BTreeSet<String> = words(&account.bio).into_iter().map(|w| format!("w:{w}")).collect();
    toks.extend(words(&account.display_name).into_iter().map(|w| format!("d:{w}")));
    let stem: String = account.screen_name.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    if !stem.is_empty() {
        toks.insert(format!("s:{}", stem.to_lowercase()));
    }
    if !account.profile_image_ref.is_empty() {
        toks.insert(format!("img:{}", account.profile_image_ref));
    }
    if !account.profile_url.is_empty() {
        toks.insert(format!("url:{}", normalize_url(&account.profile_url)));
    }
    toks.extend(account.sources.iter().map(|s| format!("src:{s}")));
    toks
}

/// Corpus-wide counts the profile cues compare against.
#[derive(Debug, Clone, Default)]
pub struct ProfileContext {
    pub url_counts: BTreeMap<String, usize>,
    pub image_counts: BTreeMap<String, usize>,
    pub tokens: BTreeMap<u64, BTreeSet<String>>,
}

impl ProfileContext {
    pub fn new(ds: &Dataset) -> Self {
        let mut ctx = Self::default();
        for a in &ds.accounts {
            if !a.profile_url.is_empty() {
                *ctx.url_counts.entry(normalize_url(&a.profile_url)).or_default() += 1;
            }
            if !a.profile_image_ref.is_empty() {
                *ctx.image_counts.entry(a.profile_image_ref.clone()).or_default() += 1;
            }
            ctx.tokens.insert(a.user_id, profile_tokens(a));
        }
        ctx
    }
}

/// Profile family. `known_bots` are compared by token-bag Jaccard; the user
/// itself is skipped so a confirmed bot is not its own best match.
pub fn profile_features(
    account: &UserAccount,
    tweets: &[&Tweet],
    ctx: &ProfileContext,
    known_bots: &BTreeSet<u64>,
) -> FeatureValues {
    let present = [
        !account.profile_image_ref.is_empty(),
        !account.profile_url.is_empty(),
        !account.bio.trim().is_empty(),
        !account.display_name.trim().is_empty(),
        account.sources.iter().any(|s| s != "null"),
        tweets.iter().any(|t| t.geo_enabled),
    ];
    let shared = |map: &BTreeMap<String, usize>, key: String| {
        f64::from(u8::from(!key.is_empty() && map.get(&key).copied().unwrap_or(0) >= 2))
    };
    let own = ctx.tokens.get(&account.user_id).cloned().unwrap_or_else(|| profile_tokens(account));
    let sim = known_bots
        .iter()
        .filter(|&&b| b != account.user_id)
        .filter_map(|b| ctx.tokens.get(b))
        .map(|t| jaccard(&own, t))
        .fold(0.0, f64::max);
    let sources: BTreeSet<&str> = account.sources.iter().map(String::as_str).collect();

    let mut out = FeatureValues::default();
    out.push("profile_completeness", present.iter().filter(|&&p| p).count() as f64 / present.len() as f64);
    out.push("name_autogen_score", name_autogen_score(&account.screen_name, &account.display_name));
    out.push(
        "url_clone_flag",
        shared(&ctx.url_counts, if account.profile_url.is_empty() { String::new() } else { normalize_url(&account.profile_url) }),
    );
    out.push("image_clone_flag", shared(&ctx.image_counts, account.profile_image_ref.clone()));
    out.push("follower_ratio", account.followers_count as f64 / (account.followings_count as f64 + 1.0));
    out.push("source_count", sources.len() as f64);
    out.push("jaccard_to_known_bots", sim);
    out
}
