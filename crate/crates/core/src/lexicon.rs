//! Token-level phrase matching shared by every lexicon-driven detector.
//!
//! Phrases and text are compared as sequences of case-folded word tokens, so
//! matches always fall on word boundaries. Among overlapping candidates the
//! leftmost wins, then the longest; accepted matches never overlap.

use std::collections::HashMap;
use std::ops::Range;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textprep::{tokenize_words, Span, Token};

/// Case-folds a token for comparison.
pub fn fold(token: &str) -> String {
    token.to_lowercase().replace('\u{2019}', "'")
}

/// Folded token sequence of a lexicon phrase.
pub fn phrase_key(phrase: &str) -> Vec<String> {
    tokenize_words(phrase)
        .iter()
        .map(|t| fold(&t.text))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseMatch<'a, T> {
    pub value: &'a T,
    /// Token index range within the scanned token list.
    pub tokens: Range<usize>,
    /// Byte span within the scanned text.
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct PhraseMatcher<T> {
    phrases: HashMap<Vec<String>, T>,
    max_len: usize,
}

impl<T> Default for PhraseMatcher<T> {
    fn default() -> Self {
        PhraseMatcher {
            phrases: HashMap::new(),
            max_len: 0,
        }
    }
}

impl<T> PhraseMatcher<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a phrase. Returns `false` (leaving the matcher unchanged) when
    /// the phrase has no word tokens or its folded form is already present.
    pub fn insert(&mut self, phrase: &str, value: T) -> bool {
        let key = phrase_key(phrase);
        if key.is_empty() || self.phrases.contains_key(&key) {
            return false;
        }
        self.max_len = self.max_len.max(key.len());
        self.phrases.insert(key, value);
        true
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.phrases.contains_key(&phrase_key(phrase))
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Leftmost-longest, non-overlapping matches over `tokens` (which must
    /// have been cut from `text`). Tokens of a multi-word match must be
    /// separated by whitespace only.
    pub fn find_all<'a>(&'a self, text: &str, tokens: &[Token]) -> Vec<PhraseMatch<'a, T>> {
        let folded: Vec<String> = tokens.iter().map(|t| fold(&t.text)).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let mut longest = None;
            let mut len = 1;
            while len <= self.max_len && i + len <= tokens.len() {
                if len > 1 {
                    let gap = &text[tokens[i + len - 2].span.end..tokens[i + len - 1].span.start];
                    if !gap.chars().all(char::is_whitespace) {
                        break;
                    }
                }
                if let Some(v) = self.phrases.get(&folded[i..i + len]) {
                    longest = Some((len, v));
                }
                len += 1;
            }
            match longest {
                Some((len, value)) => {
                    out.push(PhraseMatch {
                        value,
                        tokens: i..i + len,
                        span: Span::new(tokens[i].span.start, tokens[i + len - 1].span.end),
                    });
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }

    /// Convenience wrapper tokenising `text` itself.
    pub fn find_in<'a>(&'a self, text: &str) -> Vec<PhraseMatch<'a, T>> {
        let tokens = tokenize_words(text);
        self.find_all(text, &tokens)
    }
}

/// Short content hash used as a lexicon version tag.
pub fn version_tag(raw: &[u8]) -> String {
    let digest = hex::encode(Sha256::digest(raw));
    format!("sha256:{}", &digest[..12])
}

/// Reads a lexicon file, mapping a missing file to [`Error::LexiconNotFound`].
pub fn read_lexicon_file(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::LexiconNotFound(path.to_path_buf()));
    }
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
