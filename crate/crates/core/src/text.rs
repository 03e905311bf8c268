//! Whitespace tokenizer and tweet entity extraction.

/// Entities carried by a tweet: hashtags (without `#`), mentioned screen
/// names (without `@`), and links.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Entities {
    pub hashtags: Vec<String>,
    pub mentions: Vec<String>,
    pub urls: Vec<String>,
}

fn trim_trailing(tok: &str) -> &str {
    tok.trim_end_matches(|c: char| !(c.is_alphanumeric() || c == '_'))
}

pub fn extract_entities(text: &str) -> Entities {
    let mut out = Entities::default();
    for tok in text.split_whitespace() {
        if tok.starts_with("http://") || tok.starts_with("https://") {
            out.urls.push(tok.to_string());
        } else if let Some(rest) = tok.strip_prefix('#') {
            let tag = trim_trailing(rest);
            if !tag.is_empty() {
                out.hashtags.push(tag.to_string());
            }
        } else if let Some(rest) = tok.strip_prefix('@') {
            let name = trim_trailing(rest);
            if !name.is_empty() {
                out.mentions.push(name.to_string());
            }
        }
    }
    out
}

/// Lowercased word tokens with surrounding punctuation stripped. Hashtag and
/// mention sigils are removed so `#Vaccines` matches the keyword `vaccines`.
pub fn words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter(|t| !t.starts_with("http://") && !t.starts_with("https://"))
        .map(|t| {
            t.trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

/// Case-folded hashtag key used by the co-occurrence graph and topic sets.
pub fn fold_tag(tag: &str) -> String {
    tag.trim_start_matches('#').to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entities_strip_sigils_and_trailing_punctuation() {
        let e = extract_entities("RT @amy_b: vaccines work #VaxFacts, see https://x.co/a #health!");
        assert_eq!(e.mentions, vec!["amy_b"]);
        assert_eq!(e.hashtags, vec!["VaxFacts", "health"]);
        assert_eq!(e.urls, vec!["https://x.co/a"]);
    }

    #[test]
    fn lone_sigils_are_not_entities() {
        let e = extract_entities("# @ ok");
        assert!(e.hashtags.is_empty() && e.mentions.is_empty());
    }

    #[test]
    fn words_are_folded() {
        assert_eq!(words("Not SAFE! #Vaccines http://a.b"), vec!["not", "safe", "vaccines"]);
    }
}
