//! Schema, evidence discipline and aggregation for the five manually scored
//! interface-design metrics, plus a cue-based evidence suggester. Scores are
//! only ever assigned by a human assessor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{platform_cmp, validate_platform, write_atomic};
use crate::error::{Error, Result};
use crate::lexicon::{read_lexicon_file, version_tag, PhraseMatcher};
use crate::textprep::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceMetric {
    UntickedCheckbox,
    ReviewBeforeConsent,
    SeparateConsentSteps,
    ExplicitDenial,
    ReversibilityCue,
}

impl InterfaceMetric {
    pub const ALL: [InterfaceMetric; 5] = [
        InterfaceMetric::UntickedCheckbox,
        InterfaceMetric::ReviewBeforeConsent,
        InterfaceMetric::SeparateConsentSteps,
        InterfaceMetric::ExplicitDenial,
        InterfaceMetric::ReversibilityCue,
    ];

    pub fn max_score(self) -> u8 {
        match self {
            InterfaceMetric::UntickedCheckbox | InterfaceMetric::ReviewBeforeConsent => 1,
            _ => 2,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            InterfaceMetric::UntickedCheckbox => "unticked_checkbox",
            InterfaceMetric::ReviewBeforeConsent => "review_before_consent",
            InterfaceMetric::SeparateConsentSteps => "separate_consent_steps",
            InterfaceMetric::ExplicitDenial => "explicit_denial",
            InterfaceMetric::ReversibilityCue => "reversibility_cue",
        }
    }

    /// Column name in tabular output.
    pub fn column(self) -> &'static str {
        match self {
            InterfaceMetric::ExplicitDenial => "explicit_denial_option",
            other => other.key(),
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            InterfaceMetric::UntickedCheckbox => "Unticked Checkbox",
            InterfaceMetric::ReviewBeforeConsent => "Review-Before-Consent",
            InterfaceMetric::SeparateConsentSteps => "Separate Consent Steps",
            InterfaceMetric::ExplicitDenial => "Explicit Denial Option",
            InterfaceMetric::ReversibilityCue => "Reversibility Cue",
        }
    }
}

impl fmt::Display for InterfaceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub metric: InterfaceMetric,
    /// Verbatim quote from the assessed document.
    pub excerpt: String,
    pub sentence_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceAssessment {
    pub platform: String,
    pub unticked_checkbox: u8,
    pub review_before_consent: u8,
    pub separate_consent_steps: u8,
    pub explicit_denial: u8,
    pub reversibility_cue: u8,
    #[serde(default)]
    pub evidence: Vec<EvidenceRecord>,
    pub assessor: String,
    pub assessed_at: DateTime<Utc>,
}

impl InterfaceAssessment {
    pub fn score(&self, metric: InterfaceMetric) -> u8 {
        match metric {
            InterfaceMetric::UntickedCheckbox => self.unticked_checkbox,
            InterfaceMetric::ReviewBeforeConsent => self.review_before_consent,
            InterfaceMetric::SeparateConsentSteps => self.separate_consent_steps,
            InterfaceMetric::ExplicitDenial => self.explicit_denial,
            InterfaceMetric::ReversibilityCue => self.reversibility_cue,
        }
    }

    pub fn scores(&self) -> [u8; 5] {
        InterfaceMetric::ALL.map(|m| self.score(m))
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&raw).map_err(|e| Error::json(path, e))
    }
}

/// Every schema violation, in metric order. Empty means valid.
pub fn assessment_violations(a: &InterfaceAssessment) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = validate_platform(&a.platform) {
        out.push(e.to_string());
    }
    for m in InterfaceMetric::ALL {
        let score = a.score(m);
        if score > m.max_score() {
            out.push(format!(
                "{m} = {score} is out of range 0..={}",
                m.max_score()
            ));
        }
        if score > 0 && !a.evidence.iter().any(|e| e.metric == m) {
            out.push(format!("{m} = {score} has missing evidence"));
        }
    }
    for (i, e) in a.evidence.iter().enumerate() {
        if e.excerpt.trim().is_empty() {
            out.push(format!(
                "evidence #{} for {} has an empty excerpt",
                i + 1,
                e.metric
            ));
        }
    }
    out
}

pub fn validate_assessment(a: &InterfaceAssessment) -> Result<()> {
    let violations = assessment_violations(a);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidAssessment {
            platform: a.platform.clone(),
            violations,
        })
    }
}

/// Schema checks plus verbatim excerpt checks against the assessed document.
pub fn validate_against_document(a: &InterfaceAssessment, doc: &Document) -> Result<()> {
    let mut violations = assessment_violations(a);
    if a.platform != doc.platform {
        violations.push(format!("document belongs to {}", doc.platform));
    }
    for (i, e) in a.evidence.iter().enumerate() {
        match doc.sentence(e.sentence_index) {
            None => violations.push(format!(
                "evidence #{} cites sentence {} but the document has {}",
                i + 1,
                e.sentence_index,
                doc.sentences.len()
            )),
            Some(s) if !e.excerpt.is_empty() && !s.text.contains(e.excerpt.as_str()) => violations
                .push(format!(
                    "evidence #{} excerpt is not verbatim in sentence {}",
                    i + 1,
                    e.sentence_index
                )),
            Some(_) => {}
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidAssessment {
            platform: a.platform.clone(),
            violations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CueKind {
    UntickedCheckbox,
    ReviewBeforeConsent,
    SeparateConsentSteps,
    ExplicitDenial,
    ReversibilityCue,
    /// Consent inferred from use; informs an unticked-checkbox score of 0.
    ImplicitConsent,
}

impl CueKind {
    pub const ALL: [CueKind; 6] = [
        CueKind::UntickedCheckbox,
        CueKind::ReviewBeforeConsent,
        CueKind::SeparateConsentSteps,
        CueKind::ExplicitDenial,
        CueKind::ReversibilityCue,
        CueKind::ImplicitConsent,
    ];
}

pub const INTERFACE_CUES_FILE: &str = "interface_cues.json";
pub const DEFAULT_INTERFACE_CUES: &str = include_str!("../data/lexicons/interface_cues.json");

#[derive(Debug, Clone)]
pub struct CueLexicon {
    pub cues: BTreeMap<CueKind, Vec<String>>,
    pub version: String,
    matchers: BTreeMap<CueKind, PhraseMatcher<String>>,
}

impl CueLexicon {
    pub fn new(cues: BTreeMap<CueKind, Vec<String>>, version: impl Into<String>) -> Result<Self> {
        let mut matchers = BTreeMap::new();
        for kind in CueKind::ALL {
            let list = cues.get(&kind).map(Vec::as_slice).unwrap_or_default();
            let name = format!("interface cues ({kind:?})");
            if list.is_empty() {
                return Err(Error::InvalidLexicon {
                    name,
                    reason: "no cue phrases".into(),
                });
            }
            let mut m = PhraseMatcher::new();
            for phrase in list {
                if !m.insert(phrase, phrase.clone()) {
                    return Err(Error::DuplicateSurfaceForm {
                        name,
                        surface: phrase.clone(),
                    });
                }
            }
            matchers.insert(kind, m);
        }
        Ok(CueLexicon {
            cues,
            version: version.into(),
            matchers,
        })
    }

    pub fn from_json_str(raw: &str, origin: &Path) -> Result<Self> {
        let cues = serde_json::from_str(raw).map_err(|e| Error::json(origin, e))?;
        Self::new(cues, version_tag(raw.as_bytes()))
    }

    pub fn shipped_default() -> Self {
        Self::from_json_str(
            DEFAULT_INTERFACE_CUES,
            Path::new("<builtin interface_cues.json>"),
        )
        .expect("shipped interface cues are valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = read_lexicon_file(path)?;
        Self::from_json_str(&raw, path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceCandidate {
    pub sentence_index: usize,
    pub sentence_text: String,
    /// Matched cue phrases, in order of appearance.
    pub cues: Vec<String>,
}

/// Candidate sentences per cue kind, most cue matches first, then by
/// position. Advisory only.
pub fn suggest_evidence(
    doc: &Document,
    cues: &CueLexicon,
) -> BTreeMap<CueKind, Vec<EvidenceCandidate>> {
    let mut out = BTreeMap::new();
    for (&kind, matcher) in &cues.matchers {
        let mut candidates: Vec<EvidenceCandidate> = doc
            .sentences
            .iter()
            .filter_map(|s| {
                let hits: Vec<String> = matcher
                    .find_all(&s.text, &s.tokens)
                    .into_iter()
                    .map(|m| m.value.clone())
                    .collect();
                (!hits.is_empty()).then(|| EvidenceCandidate {
                    sentence_index: s.index,
                    sentence_text: s.text.clone(),
                    cues: hits,
                })
            })
            .collect();
        candidates.sort_by(|a, b| {
            b.cues
                .len()
                .cmp(&a.cues.len())
                .then(a.sentence_index.cmp(&b.sentence_index))
        });
        out.insert(kind, candidates);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceRow {
    pub platform: String,
    pub scores: [u8; 5],
}

/// Cross-platform score matrix, one row per platform in table order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceTable {
    pub rows: Vec<InterfaceRow>,
}

pub fn aggregate_interface(assessments: &[InterfaceAssessment]) -> Result<InterfaceTable> {
    let mut seen = BTreeSet::new();
    for a in assessments {
        if !seen.insert(a.platform.to_lowercase()) {
            return Err(Error::DuplicatePlatform(a.platform.clone()));
        }
    }
    let mut rows: Vec<InterfaceRow> = assessments
        .iter()
        .map(|a| InterfaceRow {
            platform: a.platform.clone(),
            scores: a.scores(),
        })
        .collect();
    rows.sort_by(|a, b| platform_cmp(&a.platform, &b.platform));
    Ok(InterfaceTable { rows })
}

impl InterfaceTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["platform"];
        header.extend(InterfaceMetric::ALL.map(InterfaceMetric::column));
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.platform.clone()];
            rec.extend(row.scores.iter().map(u8::to_string));
            w.write_record(&rec)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| Platform |");
        for m in InterfaceMetric::ALL {
            s.push_str(&format!(" {} |", m.title()));
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(5));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&format!("| {} |", row.platform));
            for v in row.scores {
                s.push_str(&format!(" {v} |"));
            }
            s.push('\n');
        }
        s
    }
}

/// Directory of per-platform assessment files (`<platform>.json`).
#[derive(Debug, Clone)]
pub struct AssessmentStore {
    dir: PathBuf,
}

impl AssessmentStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        AssessmentStore { dir: dir.into() }
    }

    pub fn path_for(&self, platform: &str) -> Result<PathBuf> {
        validate_platform(platform)?;
        Ok(self.dir.join(format!("{platform}.json")))
    }

    /// Validates and stores `a`. Replacing an existing file requires
    /// `overwrite`.
    pub fn save(&self, a: &InterfaceAssessment, overwrite: bool) -> Result<PathBuf> {
        validate_assessment(a)?;
        let path = self.path_for(&a.platform)?;
        if path.exists() && !overwrite {
            return Err(Error::AssessmentExists(a.platform.clone()));
        }
        let mut json = serde_json::to_vec_pretty(a).map_err(|e| Error::json(&path, e))?;
        json.push(b'\n');
        write_atomic(&path, &json)?;
        Ok(path)
    }

    pub fn load(&self, platform: &str) -> Result<Option<InterfaceAssessment>> {
        let path = self.path_for(platform)?;
        if !path.exists() {
            return Ok(None);
        }
        let a = InterfaceAssessment::from_json_file(&path)?;
        if a.platform != platform {
            return Err(Error::PlatformMismatch {
                left: platform.to_string(),
                right: a.platform,
            });
        }
        validate_assessment(&a)?;
        Ok(Some(a))
    }

    /// All stored assessments in table order. A missing directory is empty.
    pub fn load_all(&self) -> Result<Vec<InterfaceAssessment>> {
        if !self.dir.is_dir() {
            return Ok(Vec::new());
        }
        let rd = std::fs::read_dir(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let mut out = Vec::new();
        for entry in rd {
            let path = entry.map_err(|e| Error::io(&self.dir, e))?.path();
            if path.extension().is_some_and(|x| x == "json") {
                let a = InterfaceAssessment::from_json_file(&path)?;
                validate_assessment(&a)?;
                out.push(a);
            }
        }
        out.sort_by(|a, b| platform_cmp(&a.platform, &b.platform));
        Ok(out)
    }
}
