use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::text::words;

/// Term weights in `[-1, 1]` plus the tokens that flip a following term.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    terms: BTreeMap<String, f64>,
    negations: BTreeSet<String>,
}

/// Tokens before a term that are checked for negation.
pub const NEGATION_WINDOW: usize = 2;

const DEFAULT_LEXICON: &str = "\
# vaccination-topic sentiment lexicon
save\t0.8
lives\t0.6
safe\t0.9
protect\t0.7
effective\t0.8
trust\t0.6
science\t0.5
healthy\t0.6
grateful\t0.7
good\t0.5
great\t0.6
love\t0.6
happy\t0.6
win\t0.3
dangerous\t-0.9
toxic\t-0.9
harm\t-0.8
poison\t-0.9
risky\t-0.7
scam\t-0.8
lies\t-0.8
injury\t-0.7
fear\t-0.6
sick\t-0.5
bad\t-0.5
hate\t-0.7
lost\t-0.3
bills\t-0.2

[negation]
not
no
never
don't
isn't
won't
cannot
";

impl Default for SentimentLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("built-in lexicon parses")
    }
}

impl SentimentLexicon {
    pub fn new(terms: BTreeMap<String, f64>, negations: BTreeSet<String>) -> Result<Self> {
        if let Some((t, w)) = terms.iter().find(|(_, w)| !(-1.0..=1.0).contains(*w)) {
            return Err(Error::Parse { file: "lexicon".into(), line: 0, message: format!("weight {w} for {t} outside [-1, 1]") });
        }
        Ok(Self { terms, negations })
    }

    /// Parses the `term<TAB>weight` format; `#` starts a comment and the
    /// `[negation]` section lists one negation token per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = BTreeMap::new();
        let mut negations = BTreeSet::new();
        let mut in_negation = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { file: "lexicon".into(), line: idx + 1, message };
            if line.starts_with('[') {
                match line {
                    "[negation]" => in_negation = true,
                    "[terms]" => in_negation = false,
                    other => return Err(err(format!("unknown section {other}"))),
                }
                continue;
            }
            if in_negation {
                negations.insert(line.to_lowercase());
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(term), Some(weight), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(format!("expected `term<TAB>weight`, got {line:?}")));
            };
            let w: f64 = weight.parse().map_err(|_| err(format!("bad weight {weight:?}")))?;
            if !(-1.0..=1.0).contains(&w) {
                return Err(err(format!("weight {w} outside [-1, 1]")));
            }
            terms.insert(term.to_lowercase(), w);
        }
        Ok(Self { terms, negations })
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("# term<TAB>weight\n");
        for (t, w) in &self.terms {
            let _ = writeln!(s, "{t}\t{w}");
        }
        s.push_str("\n[negation]\n");
        for n in &self.negations {
            let _ = writeln!(s, "{n}");
        }
        s
    }

    pub fn weight(&self, term: &str) -> Option<f64> {
        self.terms.get(term).copied()
    }

    pub fn is_negation(&self, token: &str) -> bool {
        self.negations.contains(token)
    }
}

/// Mean weight of matched lexicon terms, each flipped when a negation token
/// occurs within the two preceding tokens; 0 when nothing matches.
pub fn score_sentiment(text: &str, lexicon: &SentimentLexicon) -> f64 {
    let toks = words(text);
    let mut sum = 0.0;
    let mut hits = 0usize;
    for (i, tok) in toks.iter().enumerate() {
        if let Some(w) = lexicon.weight(tok) {
            let negated = toks[i.saturating_sub(NEGATION_WINDOW)..i].iter().any(|t| lexicon.is_negation(t));
            sum += if negated { -w } else { w };
            hits += 1;
        }
    }
    if hits == 0 {
        0.0
    } else {
        (sum / hits as f64).clamp(-1.0, 1.0)
    }
}
