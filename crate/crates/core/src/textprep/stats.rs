use serde::{Deserialize, Serialize};

use super::syllable::SyllableCounter;
use super::Sentence;

/// Syllable count at or above which a word is "complex" (Fog), a
/// "polysyllable" (SMOG) and "hard" (Lensear).
pub const HARD_WORD_SYLLABLES: usize = 3;

/// Every count consumed by the readability formulas.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DocStats {
    pub word_count: usize,
    pub sentence_count: usize,
    pub syllable_count: usize,
    /// Alphabetic characters inside word tokens.
    pub letter_count: usize,
    /// Alphanumeric characters inside word tokens (ARI "characters").
    pub character_count: usize,
    pub complex_word_count: usize,
    pub polysyllable_count: usize,
    pub easy_word_count: usize,
    pub hard_word_count: usize,
    /// Coleman–Liau L.
    pub letters_per_100_words: f64,
    /// Coleman–Liau S.
    pub sentences_per_100_words: f64,
    /// Set when there are no words or no sentences; ratio fields are then 0.
    pub degenerate: bool,
}

/// Accumulates per-sentence counts into [`DocStats`].
pub fn compute_doc_stats(sentences: &[Sentence], syllables: &SyllableCounter) -> DocStats {
    let mut stats = DocStats {
        sentence_count: sentences.len(),
        ..DocStats::default()
    };
    for sentence in sentences {
        for token in &sentence.tokens {
            let n = syllables.count(&token.text);
            stats.word_count += 1;
            stats.syllable_count += n;
            stats.letter_count += token.text.chars().filter(|c| c.is_alphabetic()).count();
            stats.character_count += token.text.chars().filter(|c| c.is_alphanumeric()).count();
            if n >= HARD_WORD_SYLLABLES {
                stats.hard_word_count += 1;
            } else {
                stats.easy_word_count += 1;
            }
        }
    }
    stats.complex_word_count = stats.hard_word_count;
    stats.polysyllable_count = stats.hard_word_count;

    if stats.word_count == 0 || stats.sentence_count == 0 {
        return DocStats {
            degenerate: true,
            ..stats
        };
    }
    let words = stats.word_count as f64;
    stats.letters_per_100_words = 100.0 * stats.letter_count as f64 / words;
    stats.sentences_per_100_words = 100.0 * stats.sentence_count as f64 / words;
    stats
}
