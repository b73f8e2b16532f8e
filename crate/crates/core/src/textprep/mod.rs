//! Turning a raw snapshot into a normalised [`Document`]: main-text
//! extraction, sentence segmentation, word tokenisation and syllable counts.

mod extract;
mod segment;
mod stats;
mod syllable;
mod tokenize;

pub use extract::{extract_text, normalize_whitespace, ExtractionConfig, ExtractionRule};
pub use segment::{segment_sentences, ABBREVIATIONS};
pub use stats::{compute_doc_stats, DocStats, HARD_WORD_SYLLABLES};
pub use syllable::{count_syllables, SyllableCounter};
pub use tokenize::{tokenize_words, Span, Token};

use serde::{Deserialize, Serialize};

use crate::corpus::MediaKind;
use crate::error::Result;

/// One sentence. Token spans are byte offsets into `text`; `char_span` is the
/// byte range of the sentence inside [`Document::text`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub tokens: Vec<Token>,
    pub char_span: Span,
}

/// Immutable, analysed text of one Terms-of-Service document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub platform: String,
    pub text: String,
    pub sentences: Vec<Sentence>,
    pub stats: DocStats,
}

impl Document {
    pub fn from_text(
        platform: impl Into<String>,
        text: impl Into<String>,
        syllables: &SyllableCounter,
    ) -> Self {
        let text = text.into();
        let sentences = segment_sentences(&text);
        let stats = compute_doc_stats(&sentences, syllables);
        Document {
            platform: platform.into(),
            text,
            sentences,
            stats,
        }
    }

    pub fn from_payload(
        platform: impl Into<String>,
        payload: &[u8],
        media_kind: MediaKind,
        rules: &[ExtractionRule],
        syllables: &SyllableCounter,
    ) -> Result<Self> {
        let text = extract_text(payload, media_kind, rules)?;
        Ok(Self::from_text(platform, text, syllables))
    }

    pub fn sentence(&self, index: usize) -> Option<&Sentence> {
        self.sentences.get(index)
    }
}
