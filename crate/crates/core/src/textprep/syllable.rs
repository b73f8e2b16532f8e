//! Vowel-group syllable heuristic with an optional per-word exception table.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn part_syllables(part: &[char]) -> usize {
    let has_letter = part.iter().any(|c| c.is_alphabetic());
    if !has_letter {
        return 0;
    }
    let mut groups = 0usize;
    let mut in_group = false;
    for &c in part {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }

    let n = part.len();
    if groups > 0 && n >= 2 && part[n - 1] == 'e' {
        let prev = part[n - 2];
        let consonant_le =
            prev == 'l' && n >= 3 && part[n - 3].is_alphabetic() && !is_vowel(part[n - 3]);
        if !consonant_le && !is_vowel(prev) {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Heuristic syllable count for one word token.
///
/// Counts groups of adjacent vowels (`y` included), drops a terminal silent
/// `e` unless the word ends in consonant + "le", and grants at least one
/// syllable to any token containing a letter. Hyphenated tokens are counted
/// part by part; apostrophes are ignored. Pure digit tokens count zero.
pub fn count_syllables(word: &str) -> usize {
    let lower: Vec<char> = word
        .chars()
        .filter(|c| *c != '\'' && *c != '\u{2019}')
        .flat_map(|c| c.to_lowercase())
        .collect();
    lower
        .split(|c| matches!(c, '-' | '\u{2010}' | '\u{2011}'))
        .map(part_syllables)
        .sum()
}

/// Syllable counter with per-word overrides.
#[derive(Debug, Clone, Default)]
pub struct SyllableCounter {
    exceptions: HashMap<String, usize>,
}

impl SyllableCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `word<TAB>count` lines; blank lines and `#` comments are skipped.
    pub fn from_exceptions_str(source: &str) -> Result<Self> {
        let mut exceptions = HashMap::new();
        for (idx, raw) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::SyllableExceptions {
                    line: line_no,
                    reason: "expected word<TAB>count".into(),
                })?;
            let word = word.trim();
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::SyllableExceptions {
                    line: line_no,
                    reason: format!("count {:?} is not a non-negative integer", count.trim()),
                })?;
            let len = word.chars().count();
            if word.is_empty() || count == 0 || count > len {
                return Err(Error::SyllableExceptions {
                    line: line_no,
                    reason: format!("count {count} must lie in 1..={len} for {word:?}"),
                });
            }
            exceptions.insert(word.to_lowercase(), count);
        }
        Ok(SyllableCounter { exceptions })
    }

    pub fn from_exceptions_file(path: &Path) -> Result<Self> {
        let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_exceptions_str(&source)
    }

    pub fn count(&self, word: &str) -> usize {
        if !self.exceptions.is_empty() {
            if let Some(&n) = self.exceptions.get(&word.to_lowercase()) {
                return n;
            }
        }
        count_syllables(word)
    }
}
