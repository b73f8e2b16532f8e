//! Specificity of disclosed data practices: sentence detectors, document
//! counts, the 0–2 rubric and the human review round-trip.

mod detect;
mod lexicons;
mod review;

pub use detect::{
    classify_retention, classify_sharing, detect_data_types, detect_entities, entity_key,
    find_durations, RetentionClassification, RetentionLabel, SharingClassification, SharingLabel,
    RETENTION_WINDOW,
};
pub use lexicons::{
    inflections, DataTypeCategory, DataTypeEntry, LexiconSources, SpecificityLexicons,
    DATA_TYPES_FILE, ENTITIES_FILE, RETENTION_FILE, SHARING_FILE,
};
pub use review::{
    apply_review, apply_review_records, export_review, read_review, review_outcome, review_records,
    write_review, ExportOptions, ReviewHeader, ReviewOutcome, ReviewRecord, REVIEW_FORMAT,
    REVIEW_VERSION,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{Document, Span};

/// Label vocabulary of the retention and sharing detectors.
pub mod label {
    pub const EXPLICIT: &str = "explicit";
    pub const VAGUE: &str = "vague";
    pub const SPECIFIC: &str = "specific";
    pub const GENERIC: &str = "generic";
    pub const NEGATED: &str = "negated";
    pub const REJECTED: &str = "rejected";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detector {
    DataType,
    Entity,
    Retention,
    Sharing,
}

impl Detector {
    pub fn as_str(self) -> &'static str {
        match self {
            Detector::DataType => "data_type",
            Detector::Entity => "entity",
            Detector::Retention => "retention",
            Detector::Sharing => "sharing",
        }
    }

    /// Closed label sets; `None` for the open-ended data-type and entity names.
    pub fn closed_labels(self) -> Option<&'static [&'static str]> {
        match self {
            Detector::Retention => Some(&[label::EXPLICIT, label::VAGUE]),
            Detector::Sharing => Some(&[label::SPECIFIC, label::GENERIC, label::NEGATED]),
            Detector::DataType | Detector::Entity => None,
        }
    }

    /// Whether `human` may replace an auto label of this detector.
    pub fn accepts_label(self, human: &str) -> bool {
        if human == label::REJECTED {
            return true;
        }
        match self.closed_labels() {
            Some(set) => set.contains(&human),
            None => !human.trim().is_empty(),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceFinding {
    pub platform: String,
    pub sentence_index: usize,
    pub detector: Detector,
    pub auto_label: String,
    /// Byte span within the sentence text.
    pub evidence_span: Span,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reviewer_note: Option<String>,
}

impl SentenceFinding {
    pub fn effective_label(&self) -> &str {
        self.human_label.as_deref().unwrap_or(&self.auto_label)
    }

    pub fn is_rejected(&self) -> bool {
        self.effective_label() == label::REJECTED
    }

    pub(crate) fn key(&self) -> (&str, usize, Detector, Span) {
        (
            &self.platform,
            self.sentence_index,
            self.detector,
            self.evidence_span,
        )
    }
}

/// Runs every detector over every sentence, in sentence order.
pub fn detect_document(doc: &Document, lex: &SpecificityLexicons) -> Vec<SentenceFinding> {
    let p = doc.platform.as_str();
    let mut out = Vec::new();
    for s in &doc.sentences {
        out.extend(detect_data_types(p, s, lex));
        out.extend(detect_entities(p, s, lex));
        out.extend(classify_retention(p, s, lex).finding);
        out.extend(classify_sharing(p, s, lex).findings);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpecificityCounts {
    pub dt: usize,
    pub en: usize,
    pub re_explicit: usize,
    pub re_vague: usize,
    pub sg: usize,
    pub ss: usize,
}

fn single_platform(findings: &[SentenceFinding]) -> Result<()> {
    if let Some(first) = findings.first() {
        if let Some(other) = findings.iter().find(|f| f.platform != first.platform) {
            return Err(Error::MixedDocuments(
                first.platform.clone(),
                other.platform.clone(),
            ));
        }
    }
    Ok(())
}

/// Per-sentence effective classes for retention and sharing.
fn sentence_classes(
    findings: &[SentenceFinding],
    detector: Detector,
) -> BTreeMap<usize, BTreeSet<&str>> {
    let mut by_sentence: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for f in findings
        .iter()
        .filter(|f| f.detector == detector && !f.is_rejected())
    {
        by_sentence
            .entry(f.sentence_index)
            .or_default()
            .insert(f.effective_label());
    }
    by_sentence
}

/// Document-level counts from non-rejected findings. Data types and entities
/// count distinct names; retention and sharing count sentences, each sentence
/// once under its strongest label (a negated sharing sentence counts nowhere).
pub fn aggregate_counts(findings: &[SentenceFinding]) -> Result<SpecificityCounts> {
    single_platform(findings)?;
    let distinct = |d: Detector| {
        findings
            .iter()
            .filter(|f| f.detector == d && !f.is_rejected())
            .map(|f| entity_key(f.effective_label()))
            .collect::<BTreeSet<_>>()
            .len()
    };
    let mut counts = SpecificityCounts {
        dt: distinct(Detector::DataType),
        en: distinct(Detector::Entity),
        ..SpecificityCounts::default()
    };
    for labels in sentence_classes(findings, Detector::Retention).values() {
        if labels.contains(label::EXPLICIT) {
            counts.re_explicit += 1;
        } else if labels.contains(label::VAGUE) {
            counts.re_vague += 1;
        }
    }
    for labels in sentence_classes(findings, Detector::Sharing).values() {
        if labels.contains(label::NEGATED) {
            continue;
        }
        if labels.contains(label::SPECIFIC) {
            counts.ss += 1;
        } else if labels.contains(label::GENERIC) {
            counts.sg += 1;
        }
    }
    Ok(counts)
}

/// Share of sentences with at least one non-rejected finding, per detector.
/// Reported as a diagnostic only; scoring uses distinct counts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpecificityCoverage {
    pub data_type: f64,
    pub entity: f64,
    pub retention: f64,
    pub sharing: f64,
}

pub fn coverage(findings: &[SentenceFinding], sentence_count: usize) -> SpecificityCoverage {
    let share = |d: Detector| {
        if sentence_count == 0 {
            return 0.0;
        }
        let n = findings
            .iter()
            .filter(|f| f.detector == d && !f.is_rejected())
            .map(|f| f.sentence_index)
            .collect::<BTreeSet<_>>()
            .len();
        n as f64 / sentence_count as f64
    };
    SpecificityCoverage {
        data_type: share(Detector::DataType),
        entity: share(Detector::Entity),
        retention: share(Detector::Retention),
        sharing: share(Detector::Sharing),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Auto,
    PostReview,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecificityScores {
    pub dt_s: u8,
    pub en_s: u8,
    pub r_s: u8,
    pub s_s: u8,
    pub composite: f64,
    pub stage: Stage,
}

/// Fixed 0–2 rubric; the composite is the plain mean of the four sub-scores.
pub fn map_scores(counts: &SpecificityCounts, stage: Stage) -> SpecificityScores {
    let dt_s = match counts.dt {
        0 => 0,
        1..=3 => 1,
        _ => 2,
    };
    let en_s = match counts.en {
        0 => 0,
        1..=2 => 1,
        _ => 2,
    };
    let r_s = if counts.re_explicit >= 1 {
        2
    } else if counts.re_vague >= 1 {
        1
    } else {
        0
    };
    let s_s = match (counts.ss, counts.sg) {
        (3.., _) => 2,
        (1..=2, _) | (0, 1..) => 1,
        _ => 0,
    };
    SpecificityScores {
        dt_s,
        en_s,
        r_s,
        s_s,
        composite: f64::from(dt_s + en_s + r_s + s_s) / 4.0,
        stage,
    }
}
