//! Review file round-trip. The file is JSON Lines: a header object first,
//! then one record per candidate finding. Reviewers fill in `human_label`
//! (any label of the detector, or "rejected") and optionally a note.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    aggregate_counts, map_scores, Detector, SentenceFinding, SpecificityCounts, SpecificityScores,
    Stage,
};
use crate::corpus::write_atomic;
use crate::error::{Error, Result};
use crate::textprep::{Document, Span};

pub const REVIEW_FORMAT: &str = "consent-audit-review";
pub const REVIEW_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewHeader {
    pub format: String,
    pub version: u32,
    pub platforms: Vec<String>,
    pub record_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewRecord {
    pub platform: String,
    pub sentence_index: usize,
    pub detector: Detector,
    pub evidence_span: Span,
    pub sentence_text: String,
    pub auto_label: String,
    #[serde(default)]
    pub human_label: Option<String>,
    #[serde(default)]
    pub reviewer_note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExportOptions {
    /// Also export data-type and entity findings (off by default).
    pub include_data_types_and_entities: bool,
}

impl ExportOptions {
    fn exports(&self, d: Detector) -> bool {
        self.include_data_types_and_entities || matches!(d, Detector::Retention | Detector::Sharing)
    }
}

/// Builds review records, looking sentence text up by (platform, index).
/// Existing human labels are carried over so a partial review can resume.
pub fn review_records<'a>(
    findings: &[SentenceFinding],
    sentence_text: impl Fn(&str, usize) -> Option<&'a str>,
    options: ExportOptions,
) -> Result<Vec<ReviewRecord>> {
    findings
        .iter()
        .filter(|f| options.exports(f.detector))
        .map(|f| {
            let text = sentence_text(&f.platform, f.sentence_index).ok_or_else(|| unmatched(f))?;
            Ok(ReviewRecord {
                platform: f.platform.clone(),
                sentence_index: f.sentence_index,
                detector: f.detector,
                evidence_span: f.evidence_span,
                sentence_text: text.to_string(),
                auto_label: f.auto_label.clone(),
                human_label: f.human_label.clone(),
                reviewer_note: f.reviewer_note.clone(),
            })
        })
        .collect()
}

fn unmatched(f: &SentenceFinding) -> Error {
    Error::UnmatchedReviewRecord {
        platform: f.platform.clone(),
        sentence_index: f.sentence_index,
        detector: f.detector.to_string(),
        start: f.evidence_span.start,
        end: f.evidence_span.end,
    }
}

/// Writes header and records; an empty record list still yields the header.
pub fn write_review(path: &Path, records: &[ReviewRecord]) -> Result<()> {
    let mut platforms: Vec<String> = records.iter().map(|r| r.platform.clone()).collect();
    platforms.sort();
    platforms.dedup();
    let header = ReviewHeader {
        format: REVIEW_FORMAT.into(),
        version: REVIEW_VERSION,
        platforms,
        record_count: records.len(),
    };
    let mut buf = Vec::new();
    push_json(&mut buf, &header, path)?;
    for r in records {
        push_json(&mut buf, r, path)?;
    }
    write_atomic(path, &buf)
}

fn push_json<T: Serialize>(buf: &mut Vec<u8>, value: &T, path: &Path) -> Result<()> {
    serde_json::to_writer(&mut *buf, value).map_err(|e| Error::json(path, e))?;
    buf.push(b'\n');
    Ok(())
}

/// Exports the reviewable findings of one document. Returns the record count.
pub fn export_review(
    doc: &Document,
    findings: &[SentenceFinding],
    path: &Path,
    options: ExportOptions,
) -> Result<usize> {
    let records = review_records(
        findings,
        |platform, idx| {
            if platform == doc.platform {
                doc.sentence(idx).map(|s| s.text.as_str())
            } else {
                None
            }
        },
        options,
    )?;
    write_review(path, &records)?;
    Ok(records.len())
}

pub fn read_review(path: &Path) -> Result<(ReviewHeader, Vec<ReviewRecord>)> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = raw
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let malformed = |line: usize, reason: String| Error::MalformedReview {
        line: line + 1,
        reason,
    };
    let (n, first) = lines
        .next()
        .ok_or_else(|| malformed(0, "missing header record".into()))?;
    let header: ReviewHeader =
        serde_json::from_str(first).map_err(|e| malformed(n, format!("bad header: {e}")))?;
    if header.format != REVIEW_FORMAT || header.version != REVIEW_VERSION {
        return Err(malformed(
            n,
            format!("unsupported format {} v{}", header.format, header.version),
        ));
    }
    let records = lines
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| malformed(n, e.to_string())))
        .collect::<Result<Vec<ReviewRecord>>>()?;
    Ok((header, records))
}

fn normalised(s: &Option<String>) -> Option<String> {
    s.as_deref()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
}

/// Applies reviewer decisions to `findings`. Only labels and notes change;
/// applying the same records twice gives the same result. When several
/// records address one finding the last one wins.
pub fn apply_review_records(
    findings: &[SentenceFinding],
    records: &[ReviewRecord],
) -> Result<Vec<SentenceFinding>> {
    let index: HashMap<_, usize> = findings
        .iter()
        .enumerate()
        .map(|(i, f)| (f.key(), i))
        .collect();
    let mut out = findings.to_vec();
    for r in records {
        let key = (
            r.platform.as_str(),
            r.sentence_index,
            r.detector,
            r.evidence_span,
        );
        let Some(&i) = index.get(&key) else {
            return Err(Error::UnmatchedReviewRecord {
                platform: r.platform.clone(),
                sentence_index: r.sentence_index,
                detector: r.detector.to_string(),
                start: r.evidence_span.start,
                end: r.evidence_span.end,
            });
        };
        let human = normalised(&r.human_label);
        if let Some(h) = &human {
            if !r.detector.accepts_label(h) {
                return Err(Error::IllegalLabel {
                    detector: r.detector.to_string(),
                    label: h.clone(),
                });
            }
        }
        out[i].human_label = human;
        out[i].reviewer_note = normalised(&r.reviewer_note);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewOutcome {
    pub findings: Vec<SentenceFinding>,
    pub auto_counts: SpecificityCounts,
    pub post_review_counts: SpecificityCounts,
    pub auto: SpecificityScores,
    pub post_review: SpecificityScores,
}

/// Before/after counts and scores for one document's findings.
pub fn review_outcome(
    auto_findings: &[SentenceFinding],
    revised: Vec<SentenceFinding>,
) -> Result<ReviewOutcome> {
    let unreviewed: Vec<SentenceFinding> = auto_findings
        .iter()
        .cloned()
        .map(|mut f| {
            f.human_label = None;
            f
        })
        .collect();
    let auto_counts = aggregate_counts(&unreviewed)?;
    let post_review_counts = aggregate_counts(&revised)?;
    Ok(ReviewOutcome {
        auto: map_scores(&auto_counts, Stage::Auto),
        post_review: map_scores(&post_review_counts, Stage::PostReview),
        findings: revised,
        auto_counts,
        post_review_counts,
    })
}

/// Reads a review file and applies it to one document's findings.
pub fn apply_review(findings: &[SentenceFinding], path: &Path) -> Result<ReviewOutcome> {
    let (_, records) = read_review(path)?;
    let revised = apply_review_records(findings, &records)?;
    review_outcome(findings, revised)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specificity::{detect_document, SpecificityLexicons};
    use crate::textprep::SyllableCounter;

    fn doc() -> Document {
        Document::from_text(
            "Bluesky",
            "We share data with partners for fraud detection. We use data to provide our services. \
             We retain logs for 30 days. We do not share your messages.",
            &SyllableCounter::new(),
        )
    }

    #[test]
    fn export_skips_dt_en_by_default() {
        let d = doc();
        let lex = SpecificityLexicons::shipped_default();
        let findings = detect_document(&d, &lex);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("review.jsonl");
        let n = export_review(&d, &findings, &path, ExportOptions::default()).unwrap();
        assert_eq!(n, 4);
        let (header, records) = read_review(&path).unwrap();
        assert_eq!(header.record_count, 4);
        assert!(records.iter().all(|r| r.human_label.is_none()));
        assert_eq!(
            records[0].sentence_text,
            "We share data with partners for fraud detection."
        );
        let all = ExportOptions {
            include_data_types_and_entities: true,
        };
        assert!(export_review(&d, &findings, &path, all).unwrap() > 4);
    }

    #[test]
    fn empty_export_has_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        export_review(&doc(), &[], &path, ExportOptions::default()).unwrap();
        let raw = std::fs::read_to_string(&path).unwrap();
        assert_eq!(raw.lines().count(), 1);
        let (h, r) = read_review(&path).unwrap();
        assert_eq!((h.record_count, r.len()), (0, 0));
    }

    #[test]
    fn apply_is_idempotent_and_validates() {
        let d = doc();
        let findings = detect_document(&d, &SpecificityLexicons::shipped_default());
        let mut records = review_records(
            &findings,
            |_, i| d.sentence(i).map(|s| s.text.as_str()),
            ExportOptions::default(),
        )
        .unwrap();
        records[0].human_label = Some("rejected".into());
        let once = apply_review_records(&findings, &records).unwrap();
        let twice = apply_review_records(&once, &records).unwrap();
        assert_eq!(once, twice);
        let out = review_outcome(&findings, once).unwrap();
        assert_eq!((out.auto_counts.ss, out.post_review_counts.ss), (1, 0));

        records[0].human_label = Some("explicit".into());
        assert!(matches!(
            apply_review_records(&findings, &records),
            Err(Error::IllegalLabel { .. })
        ));

        records[0].human_label = None;
        records[0].sentence_index = 99;
        let err = apply_review_records(&findings, &records).unwrap_err();
        assert!(err.to_string().contains("unmatched review record"));
    }

    #[test]
    fn malformed_lines_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        std::fs::write(
            &path,
            "{\"format\":\"other\",\"version\":1,\"platforms\":[],\"record_count\":0}\n",
        )
        .unwrap();
        assert!(matches!(
            read_review(&path),
            Err(Error::MalformedReview { line: 1, .. })
        ));
        std::fs::write(&path, "").unwrap();
        assert!(read_review(&path).is_err());
    }
}
