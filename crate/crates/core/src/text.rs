//! Lyrics tokenization: normalization, stop-word removal, Porter stemming
//! and n-gram expansion.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::porter::porter_stem;

pub(crate) const STOPWORDS_EN: &str = include_str!("../data/stopwords_en.txt");

/// SHA-256 of `data/stopwords_en.txt`.
pub const STOPWORDS_EN_SHA256: &str =
    "b3f772a000465cb76e23adb03b47073c591c156fad8f7af09c8b8e80d6bd8eac";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenizerConfig {
    ngram_lo: u8,
    ngram_hi: u8,
    pub remove_stopwords: bool,
    pub stem: bool,
}

impl TokenizerConfig {
    pub fn new(ngram_lo: u8, ngram_hi: u8, remove_stopwords: bool, stem: bool) -> Result<Self> {
        if !(1..=3).contains(&ngram_lo) || !(1..=3).contains(&ngram_hi) {
            return Err(Error::TokenizerConfig(format!(
                "n-gram bounds must lie in 1..=3, got ({ngram_lo}, {ngram_hi})"
            )));
        }
        if ngram_lo > ngram_hi {
            return Err(Error::TokenizerConfig(format!(
                "ngram_lo ({ngram_lo}) exceeds ngram_hi ({ngram_hi})"
            )));
        }
        Ok(TokenizerConfig {
            ngram_lo,
            ngram_hi,
            remove_stopwords,
            stem,
        })
    }

    /// Unigrams only, no stop-word removal, no stemming.
    pub fn plain() -> Self {
        TokenizerConfig {
            ngram_lo: 1,
            ngram_hi: 1,
            remove_stopwords: false,
            stem: false,
        }
    }

    pub fn ngram_range(&self) -> (u8, u8) {
        (self.ngram_lo, self.ngram_hi)
    }
}

impl Default for TokenizerConfig {
    /// Unigrams with stop-word removal and stemming.
    fn default() -> Self {
        TokenizerConfig {
            ngram_lo: 1,
            ngram_hi: 1,
            remove_stopwords: true,
            stem: true,
        }
    }
}

/// Ordered lowercase terms; n-grams are joined by a single space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for TokenStream {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenStream {
            tokens: iter.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
    sha256: String,
}

impl StopWords {
    /// Parses a one-word-per-line list. Blank lines are skipped.
    pub fn from_list(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(str::to_lowercase)
            .collect();
        StopWords {
            words,
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        }
    }

    pub fn empty() -> Self {
        Self::from_list("")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// SHA-256 of the source list, as hex.
    pub fn checksum(&self) -> &str {
        &self.sha256
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// The embedded 127-word English stop list.
pub fn default_stopwords() -> &'static StopWords {
    static LIST: OnceLock<StopWords> = OnceLock::new();
    LIST.get_or_init(|| StopWords::from_list(STOPWORDS_EN))
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Lowercases `text` and splits it into maximal runs of letters, digits and
/// apostrophes, trimming apostrophes from both ends of each run.
pub fn base_tokens(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase().replace('\u{2019}', "'");
    lowered
        .split(|c: char| !is_token_char(c))
        .map(|run| run.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn tokenize(text: &str, cfg: &TokenizerConfig, stopwords: &StopWords) -> TokenStream {
    let mut words = base_tokens(text);
    if cfg.remove_stopwords {
        words.retain(|w| !stopwords.contains(w));
    }
    if cfg.stem {
        for w in &mut words {
            *w = porter_stem(w);
        }
    }
    TokenStream {
        tokens: ngrams(&words, cfg.ngram_lo as usize, cfg.ngram_hi as usize),
    }
}

/// All n-grams for `n` in `lo..=hi`, grouped by `n` ascending.
pub fn ngrams(words: &[String], lo: usize, hi: usize) -> Vec<String> {
    if lo == 1 && hi == 1 {
        return words.to_vec();
    }
    let mut out = Vec::new();
    for n in lo..=hi {
        out.extend(words.windows(n).map(|w| w.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stops(words: &[&str]) -> StopWords {
        StopWords::from_list(&words.join("\n"))
    }

    #[test]
    fn hand_traced_pipeline() {
        let cfg = TokenizerConfig::plain();
        let ts = tokenize("Love, love me!", &cfg, &stops(&["me"]));
        assert_eq!(ts.tokens, ["love", "love", "me"]);
        let cfg = TokenizerConfig::new(1, 1, true, false).unwrap();
        let ts = tokenize("Love, love me!", &cfg, &stops(&["me"]));
        assert_eq!(ts.tokens, ["love", "love"]);
    }

    #[test]
    fn empty_text() {
        let ts = tokenize("", &TokenizerConfig::default(), default_stopwords());
        assert!(ts.is_empty());
    }

    #[test]
    fn unigram_and_bigram_expansion() {
        let cfg = TokenizerConfig::new(1, 2, false, false).unwrap();
        let ts = tokenize("a b c", &cfg, &StopWords::empty());
        assert_eq!(ts.tokens, ["a", "b", "c", "a b", "b c"]);
        let cfg = TokenizerConfig::new(3, 3, false, false).unwrap();
        assert!(tokenize("a b", &cfg, &StopWords::empty()).is_empty());
    }

    #[test]
    fn apostrophes_and_digits() {
        assert_eq!(
            base_tokens("Don't stop 'til the '90s... rock'n'roll’s"),
            ["don't", "stop", "til", "the", "90s", "rock'n'roll's"]
        );
        assert!(base_tokens("''' ... !!").is_empty());
    }

    #[test]
    fn stop_removal_precedes_stemming() {
        let cfg = TokenizerConfig::new(1, 1, true, true).unwrap();
        let ts = tokenize("was running", &cfg, default_stopwords());
        assert_eq!(ts.tokens, ["run"]);
    }

    #[test]
    fn invalid_configs() {
        assert!(TokenizerConfig::new(2, 1, false, false).is_err());
        assert!(TokenizerConfig::new(0, 1, false, false).is_err());
        assert!(TokenizerConfig::new(1, 4, false, false).is_err());
    }

    #[test]
    fn embedded_stop_list() {
        let sw = default_stopwords();
        assert_eq!(sw.len(), 127);
        assert!(sw.contains("the"));
        assert!(!sw.contains("love"));
        assert_eq!(sw.checksum(), STOPWORDS_EN_SHA256);
    }
}
