//! Sentence-level detectors. All are pure functions of the sentence and the
//! lexicons; evidence spans are byte offsets within the sentence text.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{label, Detector, SentenceFinding, SpecificityLexicons};
use crate::lexicon::fold;
use crate::textprep::{Sentence, Span, Token};

/// Maximum token distance between a retention verb and a numeric duration.
pub const RETENTION_WINDOW: usize = 10;

const DETERMINERS: &[&str] = &[
    "The", "This", "These", "Those", "Our", "Your", "Their", "Its", "Each", "Any", "All", "Such",
    "A", "An",
];

const UNITS: &[&str] = &["day", "week", "month", "year"];
const UNIT_QUALIFIERS: &[&str] = &["business", "calendar", "consecutive"];

const NUMBER_WORDS: &[&str] = &[
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
    "thirty",
    "forty",
    "fifty",
    "sixty",
    "seventy",
    "eighty",
    "ninety",
    "hundred",
];

fn finding(
    platform: &str,
    sentence: &Sentence,
    detector: Detector,
    auto_label: &str,
    span: Span,
) -> SentenceFinding {
    SentenceFinding {
        platform: platform.to_string(),
        sentence_index: sentence.index,
        detector,
        auto_label: auto_label.to_string(),
        evidence_span: span,
        human_label: None,
        reviewer_note: None,
    }
}

/// One finding per distinct data type named in the sentence.
pub fn detect_data_types(
    platform: &str,
    sentence: &Sentence,
    lex: &SpecificityLexicons,
) -> Vec<SentenceFinding> {
    let mut seen = HashSet::new();
    lex.data_type_matcher
        .find_all(&sentence.text, &sentence.tokens)
        .into_iter()
        .filter(|m| seen.insert(fold(m.value)))
        .map(|m| finding(platform, sentence, Detector::DataType, m.value, m.span))
        .collect()
}

/// Curated organisation names (capitalised occurrences only) plus
/// "Name Name, Suffix" corporate designations. A suffix match supersedes any
/// curated name inside it.
pub fn detect_entities(
    platform: &str,
    sentence: &Sentence,
    lex: &SpecificityLexicons,
) -> Vec<SentenceFinding> {
    let text = &sentence.text;
    let mut hits: Vec<(Span, String)> = Vec::new();
    for m in lex.suffix_pattern.find_iter(text) {
        let mut start = m.start();
        loop {
            let rest = &text[start..m.end()];
            let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let word = &rest[..word_end];
            if DETERMINERS.contains(&word) && word_end < rest.len() {
                start += word_end + rest[word_end..].len() - rest[word_end..].trim_start().len();
            } else {
                break;
            }
        }
        let surface = &text[start..m.end()];
        // The remaining text must hold a name before the suffix.
        if surface.split_whitespace().count() >= 2 {
            hits.push((Span::new(start, m.end()), surface.to_string()));
        }
    }
    for m in lex.entity_matcher.find_all(text, &sentence.tokens) {
        let capitalised = text[m.span.start..]
            .chars()
            .next()
            .is_some_and(char::is_uppercase);
        if capitalised && !hits.iter().any(|(s, _)| s.overlaps(&m.span)) {
            hits.push((m.span, m.value.clone()));
        }
    }
    hits.sort_by_key(|(s, _)| s.start);
    let mut seen = HashSet::new();
    hits.into_iter()
        .filter(|(_, name)| seen.insert(entity_key(name)))
        .map(|(span, name)| finding(platform, sentence, Detector::Entity, &name, span))
        .collect()
}

/// Distinctness key for entity and data-type labels.
pub fn entity_key(name: &str) -> String {
    fold(name.trim()).trim_end_matches('.').to_string()
}

fn is_unit(tok: &str) -> bool {
    let t = tok.strip_suffix('s').unwrap_or(tok);
    UNITS.contains(&t)
}

fn is_number_word(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .split(['-', '‐', '‑'])
            .all(|p| NUMBER_WORDS.contains(&p))
}

fn is_number(tok: &str) -> bool {
    tok.chars().all(|c| c.is_ascii_digit()) && !tok.is_empty() || is_number_word(tok)
}

/// Compound token such as "30-day" or "thirty-day".
fn is_compound_duration(tok: &str) -> bool {
    match tok.rsplit_once(['-', '‐', '‑']) {
        Some((num, unit)) => is_number(num) && is_unit(unit),
        None => false,
    }
}

/// Token ranges of numeric durations in the sentence.
pub fn find_durations(tokens: &[Token]) -> Vec<std::ops::Range<usize>> {
    let folded: Vec<String> = tokens.iter().map(|t| fold(&t.text)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < folded.len() {
        if is_compound_duration(&folded[i]) {
            out.push(i..i + 1);
            i += 1;
            continue;
        }
        if is_number(&folded[i]) {
            let mut j = i + 1;
            if j < folded.len() && UNIT_QUALIFIERS.contains(&folded[j].as_str()) {
                j += 1;
            }
            if j < folded.len() && is_unit(&folded[j]) {
                out.push(i..j + 1);
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetentionLabel {
    Explicit,
    Vague,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetentionClassification {
    pub label: RetentionLabel,
    pub finding: Option<SentenceFinding>,
}

fn token_distance(a: &std::ops::Range<usize>, b: &std::ops::Range<usize>) -> usize {
    if a.end <= b.start {
        b.start - (a.end - 1)
    } else if b.end <= a.start {
        a.start - (b.end - 1)
    } else {
        0
    }
}

pub fn classify_retention(
    platform: &str,
    sentence: &Sentence,
    lex: &SpecificityLexicons,
) -> RetentionClassification {
    let tokens = &sentence.tokens;
    let durations = find_durations(tokens);
    let verbs = lex.retention_verb_matcher.find_all(&sentence.text, tokens);
    for v in &verbs {
        if let Some(d) = durations
            .iter()
            .find(|d| token_distance(&v.tokens, d) <= RETENTION_WINDOW)
        {
            let start = v.span.start.min(tokens[d.start].span.start);
            let end = v.span.end.max(tokens[d.end - 1].span.end);
            return RetentionClassification {
                label: RetentionLabel::Explicit,
                finding: Some(finding(
                    platform,
                    sentence,
                    Detector::Retention,
                    label::EXPLICIT,
                    Span::new(start, end),
                )),
            };
        }
    }
    if durations.is_empty() {
        if let Some(m) = lex
            .vague_retention_matcher
            .find_all(&sentence.text, tokens)
            .first()
        {
            return RetentionClassification {
                label: RetentionLabel::Vague,
                finding: Some(finding(
                    platform,
                    sentence,
                    Detector::Retention,
                    label::VAGUE,
                    m.span,
                )),
            };
        }
    }
    RetentionClassification {
        label: RetentionLabel::None,
        finding: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingLabel {
    Specific,
    Generic,
    Negated,
    None,
}

/// `label` is the sentence's overall class (negated, then specific, then
/// generic). `findings` holds one record per applicable class so a reviewer
/// can reject each independently.
#[derive(Debug, Clone, PartialEq)]
pub struct SharingClassification {
    pub label: SharingLabel,
    pub findings: Vec<SentenceFinding>,
}

pub fn classify_sharing(
    platform: &str,
    sentence: &Sentence,
    lex: &SpecificityLexicons,
) -> SharingClassification {
    let text = &sentence.text;
    let tokens = &sentence.tokens;
    let none = SharingClassification {
        label: SharingLabel::None,
        findings: Vec::new(),
    };
    if lex.sharing_verb_matcher.find_all(text, tokens).is_empty() {
        return none;
    }
    let mut findings = Vec::new();
    let mut overall = SharingLabel::None;
    let families = [
        (&lex.negation_matcher, label::NEGATED, SharingLabel::Negated),
        (
            &lex.specific_matcher,
            label::SPECIFIC,
            SharingLabel::Specific,
        ),
        (&lex.generic_matcher, label::GENERIC, SharingLabel::Generic),
    ];
    for (matcher, name, class) in families {
        if let Some(m) = matcher.find_all(text, tokens).first() {
            findings.push(finding(platform, sentence, Detector::Sharing, name, m.span));
            if overall == SharingLabel::None {
                overall = class;
            }
        }
    }
    SharingClassification {
        label: overall,
        findings,
    }
}
