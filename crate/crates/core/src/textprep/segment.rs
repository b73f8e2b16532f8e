//! Deterministic sentence segmentation.
//!
//! A sentence ends at `.`, `!` or `?` (plus any trailing terminators and
//! closing quotes or brackets) when the next non-space character is an
//! uppercase letter, an opening quote or bracket, or a digit, or when the
//! paragraph ends. A period directly after one of [`ABBREVIATIONS`] never
//! ends a sentence. Decimal points are never followed by whitespace and so
//! never split. Paragraph breaks (blank lines) always end a sentence.

use super::tokenize::{tokenize_words, Span};
use super::Sentence;

/// Abbreviations whose trailing period does not end a sentence (case-insensitive).
pub const ABBREVIATIONS: &[&str] = &[
    "inc.", "ltd.", "corp.", "e.g.", "i.e.", "etc.", "no.", "u.s.", "v.", "mr.", "dr.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

fn ends_with_abbreviation(text: &str, period_at: usize) -> bool {
    let head = &text[..=period_at];
    let word_start = head
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace())
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0);
    let word = head[word_start..]
        .trim_start_matches(is_opener)
        .to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

/// Byte offsets (relative to `para`) at which sentences end.
fn boundaries(para: &str) -> Vec<usize> {
    let chars: Vec<(usize, char)> = para.char_indices().collect();
    let mut cuts = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminator(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        let end = chars.get(j).map(|&(p, _)| p).unwrap_or(para.len());
        let suppressed = c == '.' && j == i + 1 && ends_with_abbreviation(para, pos);

        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let split = if k == chars.len() {
            true
        } else if k > j {
            let next = chars[k].1;
            next.is_uppercase() || is_opener(next) || next.is_ascii_digit()
        } else {
            false
        };
        if split && !suppressed {
            cuts.push(end);
        }
        i = j.max(i + 1);
    }
    if cuts.last() != Some(&para.len()) {
        cuts.push(para.len());
    }
    cuts
}

/// Paragraphs of `text` as byte spans, separated by blank lines.
fn paragraphs(text: &str) -> Vec<Span> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\n' {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t' || bytes[j] == b'\r') {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'\n' {
                out.push(Span::new(start, i));
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    out.push(Span::new(start, text.len()));
    out
}

/// Segments `text` into sentences with spans into `text`. Fragments without
/// any word token (stray punctuation) are dropped.
pub fn segment_sentences(text: &str) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    for para in paragraphs(text) {
        let body = &text[para.start..para.end];
        let mut from = 0;
        for cut in boundaries(body) {
            let raw = &body[from..cut];
            let lead = raw.len() - raw.trim_start().len();
            let trimmed = raw.trim();
            from = cut;
            if trimmed.is_empty() {
                continue;
            }
            let tokens = tokenize_words(trimmed);
            if tokens.is_empty() {
                continue;
            }
            let start = para.start + (cut - raw.len()) + lead;
            sentences.push(Sentence {
                index: sentences.len(),
                text: trimmed.to_string(),
                tokens,
                char_span: Span::new(start, start + trimmed.len()),
            });
        }
    }
    sentences
}
