//! Whole-corpus analysis: the latest snapshot of every platform is run
//! through every analysis, producing the canonical JSON result set.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clarity::{
    load_vague_lexicon, scan_vague_terms_with, ClarityReport, ScanOptions, VagueLexicon,
    VAGUE_TERMS_FILE,
};
use crate::corpus::{platform_cmp, write_atomic, Corpus, SnapshotEntry};
use crate::error::{Error, Result};
use crate::interface::{validate_against_document, AssessmentStore, InterfaceAssessment};
use crate::readability::{
    compute_readability_profile_with, default_reader_groups, estimate_reading_time,
    load_reader_groups, LensearVariant, ReadabilityBand, ReadabilityOptions, ReadabilityProfile,
    ReaderGroup, READER_GROUPS_FILE,
};
use crate::specificity::{
    apply_review_records, coverage, detect_document, review_outcome, review_records, ExportOptions,
    ReviewRecord, SentenceFinding, SpecificityCounts, SpecificityCoverage, SpecificityLexicons,
    SpecificityScores,
};
use crate::textprep::{DocStats, Document, ExtractionConfig, SyllableCounter};

pub const RESULTS_SCHEMA_VERSION: u32 = 1;
pub const SYLLABLE_EXCEPTIONS_FILE: &str = "syllable_exceptions.tsv";
pub const EXTRACTION_FILE: &str = "extraction.json";
pub const ASSESSMENTS_DIR: &str = "assessments";

/// Every lexicon and table the analyses depend on.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub vague: VagueLexicon,
    pub specificity: SpecificityLexicons,
    pub syllables: SyllableCounter,
    pub reader_groups: Vec<ReaderGroup>,
}

impl Lexicons {
    pub fn shipped_default() -> Self {
        Lexicons {
            vague: VagueLexicon::shipped_default(),
            specificity: SpecificityLexicons::shipped_default(),
            syllables: SyllableCounter::new(),
            reader_groups: default_reader_groups(),
        }
    }

    /// Loads lexicons from `dir`. The vague-term and specificity files are
    /// required; syllable exceptions and reader groups fall back to defaults.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let vague = load_vague_lexicon(&dir.join(VAGUE_TERMS_FILE))?;
        let specificity = SpecificityLexicons::load_dir(dir)?;
        let exceptions = dir.join(SYLLABLE_EXCEPTIONS_FILE);
        let syllables = if exceptions.exists() {
            SyllableCounter::from_exceptions_file(&exceptions)?
        } else {
            SyllableCounter::new()
        };
        let groups = dir.join(READER_GROUPS_FILE);
        let reader_groups = if groups.exists() {
            load_reader_groups(&groups)?
        } else {
            default_reader_groups()
        };
        Ok(Lexicons {
            vague,
            specificity,
            syllables,
            reader_groups,
        })
    }

    pub fn versions(&self) -> LexiconVersions {
        LexiconVersions {
            vague_terms: self.vague.version.clone(),
            specificity: self.specificity.version.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconVersions {
    pub vague_terms: String,
    pub specificity: String,
}

/// Options that change results; they are echoed into the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub lensear: LensearVariant,
    pub match_vague_variants: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            lensear: LensearVariant::AsPublished,
            match_vague_variants: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub analysis: AnalysisOptions,
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
    /// Assessment directory; defaults to `<corpus>/assessments`.
    pub assessments_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotRef {
    pub source_url: String,
    pub retrieved_at: DateTime<Utc>,
    pub content_digest: String,
}

impl From<&SnapshotEntry> for SnapshotRef {
    fn from(e: &SnapshotEntry) -> Self {
        SnapshotRef {
            source_url: e.source_url.clone(),
            retrieved_at: e.retrieved_at,
            content_digest: e.content_digest.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFluency {
    pub group: String,
    pub wpm_low: f64,
    pub wpm_high: f64,
    pub minutes_low: f64,
    pub minutes_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityResult {
    pub scores: ReadabilityProfile<f64>,
    pub bands: Vec<ReadabilityBand>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecificityResult {
    pub auto_counts: SpecificityCounts,
    pub post_review_counts: SpecificityCounts,
    pub auto: SpecificityScores,
    pub post_review: SpecificityScores,
    pub coverage: SpecificityCoverage,
    pub findings: Vec<SentenceFinding>,
    /// Text of every sentence cited by a finding, for review export.
    pub sentences: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformResult {
    pub platform: String,
    pub snapshot: SnapshotRef,
    pub doc_stats: DocStats,
    pub readability: ReadabilityResult,
    pub fluency: Vec<GroupFluency>,
    pub clarity: ClarityReport,
    pub specificity: SpecificityResult,
    pub interface: Option<InterfaceAssessment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformFailure {
    pub platform: String,
    pub error: String,
}

/// Contents of `results.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub schema_version: u32,
    pub lexicon_versions: LexiconVersions,
    pub options: AnalysisOptions,
    pub results: Vec<PlatformResult>,
    pub failures: Vec<PlatformFailure>,
}

impl PipelineOutput {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&raw).map_err(|e| Error::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_vec_pretty(self).map_err(|e| Error::json(path, e))?;
        json.push(b'\n');
        write_atomic(path, &json)
    }

    /// Review records for every result, in table order.
    pub fn review_records(&self, options: ExportOptions) -> Result<Vec<ReviewRecord>> {
        let mut out = Vec::new();
        for r in &self.results {
            let s = &r.specificity;
            out.extend(review_records(
                &s.findings,
                |_, idx| s.sentences.get(&idx).map(String::as_str),
                options,
            )?);
        }
        Ok(out)
    }

    /// Applies reviewer decisions, recomputing post-review counts and scores.
    /// Auto-stage values are never touched.
    pub fn apply_review(&self, records: &[ReviewRecord]) -> Result<PipelineOutput> {
        let known: BTreeSet<&str> = self.results.iter().map(|r| r.platform.as_str()).collect();
        if let Some(r) = records
            .iter()
            .find(|r| !known.contains(r.platform.as_str()))
        {
            return Err(Error::UnmatchedReviewRecord {
                platform: r.platform.clone(),
                sentence_index: r.sentence_index,
                detector: r.detector.to_string(),
                start: r.evidence_span.start,
                end: r.evidence_span.end,
            });
        }
        let mut next = self.clone();
        for result in &mut next.results {
            let mine: Vec<ReviewRecord> = records
                .iter()
                .filter(|r| r.platform == result.platform)
                .cloned()
                .collect();
            let spec = &mut result.specificity;
            let revised = apply_review_records(&spec.findings, &mine)?;
            let outcome = review_outcome(&spec.findings, revised)?;
            spec.coverage = coverage(&outcome.findings, result.doc_stats.sentence_count);
            spec.findings = outcome.findings;
            spec.post_review_counts = outcome.post_review_counts;
            spec.post_review = outcome.post_review;
        }
        Ok(next)
    }
}

/// Analyses one document. Fails only on a degenerate document.
pub fn analyze_document(
    doc: &Document,
    snapshot: SnapshotRef,
    lex: &Lexicons,
    options: AnalysisOptions,
    interface: Option<InterfaceAssessment>,
) -> Result<PlatformResult> {
    if doc.stats.degenerate || doc.stats.word_count == 0 {
        return Err(Error::DegenerateDocument(format!(
            "{} has no scorable text",
            doc.platform
        )));
    }
    let scores = compute_readability_profile_with::<f64>(
        &doc.stats,
        ReadabilityOptions {
            lensear: options.lensear,
        },
    )?;
    let bands = scores.bands();
    let fluency = lex
        .reader_groups
        .iter()
        .map(|g| {
            let est = estimate_reading_time::<f64>(doc.stats.word_count, g);
            GroupFluency {
                group: g.name.clone(),
                wpm_low: g.wpm_low,
                wpm_high: g.wpm_high,
                minutes_low: est.minutes_low,
                minutes_high: est.minutes_high,
            }
        })
        .collect();
    let clarity = scan_vague_terms_with(
        doc,
        &lex.vague,
        ScanOptions {
            match_variants: options.match_vague_variants,
        },
    );
    let findings = detect_document(doc, &lex.specificity);
    let outcome = review_outcome(&findings, findings.clone())?;
    let sentences = findings
        .iter()
        .map(|f| f.sentence_index)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter_map(|i| doc.sentence(i).map(|s| (i, s.text.clone())))
        .collect();
    if let Some(a) = &interface {
        validate_against_document(a, doc)?;
    }
    Ok(PlatformResult {
        platform: doc.platform.clone(),
        snapshot,
        doc_stats: doc.stats,
        readability: ReadabilityResult { scores, bands },
        fluency,
        clarity,
        specificity: SpecificityResult {
            auto_counts: outcome.auto_counts,
            post_review_counts: outcome.post_review_counts,
            auto: outcome.auto,
            post_review: outcome.post_review,
            coverage: coverage(&findings, doc.stats.sentence_count),
            findings,
            sentences,
        },
        interface,
    })
}

/// Runs every analysis over the latest snapshot of each platform. Lexicon
/// and corpus problems abort; per-document problems become failures.
pub fn run_pipeline(
    corpus_dir: &Path,
    lexicon_dir: &Path,
    options: &PipelineOptions,
) -> Result<PipelineOutput> {
    let lex = Lexicons::load_dir(lexicon_dir)?;
    run_pipeline_with(corpus_dir, &lex, options)
}

pub fn run_pipeline_with(
    corpus_dir: &Path,
    lex: &Lexicons,
    options: &PipelineOptions,
) -> Result<PipelineOutput> {
    let corpus = Corpus::open_existing(corpus_dir)?;
    let extraction_path = corpus_dir.join(EXTRACTION_FILE);
    let extraction = if extraction_path.exists() {
        ExtractionConfig::load(&extraction_path)?
    } else {
        ExtractionConfig::default()
    };
    let store = AssessmentStore::new(
        options
            .assessments_dir
            .clone()
            .unwrap_or_else(|| corpus_dir.join(ASSESSMENTS_DIR)),
    );
    let entries = corpus.manifest().latest();

    let analyse = |entry: &&SnapshotEntry| -> std::result::Result<PlatformResult, PlatformFailure> {
        let run = || -> Result<PlatformResult> {
            let payload = corpus.read_verified(entry)?;
            let doc = Document::from_payload(
                entry.platform.clone(),
                &payload,
                entry.media_kind,
                extraction.rules_for(&entry.platform),
                &lex.syllables,
            )?;
            let interface = store.load(&entry.platform)?;
            analyze_document(
                &doc,
                SnapshotRef::from(*entry),
                lex,
                options.analysis,
                interface,
            )
        };
        run().map_err(|e| PlatformFailure {
            platform: entry.platform.clone(),
            error: e.to_string(),
        })
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<_> = pool.install(|| entries.par_iter().map(analyse).collect());

    let mut results = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => results.push(r),
            Err(f) => failures.push(f),
        }
    }
    results.sort_by(|a, b| platform_cmp(&a.platform, &b.platform));
    failures.sort_by(|a, b| platform_cmp(&a.platform, &b.platform));
    Ok(PipelineOutput {
        schema_version: RESULTS_SCHEMA_VERSION,
        lexicon_versions: lex.versions(),
        options: options.analysis,
        results,
        failures,
    })
}
