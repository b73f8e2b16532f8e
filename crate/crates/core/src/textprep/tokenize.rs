use serde::{Deserialize, Serialize};

/// Half-open byte range `[start, end)` into some UTF-8 string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// A word token with its byte span in the string it was cut from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub span: Span,
}

pub(crate) fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}' | '\u{2011}')
}

/// Splits text into word tokens: maximal runs of letters and digits, keeping
/// an apostrophe or hyphen only when it sits between two such characters
/// ("third-party", "don't"). Case is preserved.
pub fn tokenize_words(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    let mut start: Option<usize> = None;

    while let Some((i, c)) = iter.next() {
        if c.is_alphanumeric() {
            if start.is_none() {
                start = Some(i);
            }
            continue;
        }
        if let Some(s) = start {
            let next_is_word = iter
                .peek()
                .map(|&(_, n)| n.is_alphanumeric())
                .unwrap_or(false);
            if is_joiner(c) && next_is_word {
                continue;
            }
            tokens.push(Token {
                text: text[s..i].to_string(),
                span: Span::new(s, i),
            });
            start = None;
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: text[s..].to_string(),
            span: Span::new(s, text.len()),
        });
    }
    tokens
}
