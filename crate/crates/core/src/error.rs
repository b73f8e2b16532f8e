use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("lexicon not found: {0}")]
    LexiconNotFound(PathBuf),

    #[error("invalid lexicon {name}: {reason}")]
    InvalidLexicon { name: String, reason: String },

    #[error("duplicate surface form {surface:?} in lexicon {name}")]
    DuplicateSurfaceForm { name: String, surface: String },

    #[error("invalid url {url}: {reason}")]
    InvalidUrl { url: String, reason: String },

    #[error("network failure fetching {url}: {reason}")]
    Network { url: String, reason: String },

    #[error("timeout fetching {url}")]
    Timeout { url: String },

    #[error("http status {status} fetching {url}")]
    HttpStatus { url: String, status: u16 },

    #[error("digest mismatch for {platform}: entry says {expected}, payload hashes to {actual}")]
    DigestMismatch {
        platform: String,
        expected: String,
        actual: String,
    },

    #[error("platform mismatch: {left} vs {right}")]
    PlatformMismatch { left: String, right: String },

    #[error("invalid platform identifier {0:?}")]
    InvalidPlatform(String),

    #[error(
        "snapshot for {platform} retrieved at {retrieved_at} predates the latest stored snapshot"
    )]
    OutOfOrderSnapshot {
        platform: String,
        retrieved_at: String,
    },

    #[error("empty document")]
    EmptyDocument,

    #[error("degenerate document: {0}")]
    DegenerateDocument(String),

    #[error("invalid extraction rule {selector:?}: {reason}")]
    InvalidSelector { selector: String, reason: String },

    #[error("syllable exception file line {line}: {reason}")]
    SyllableExceptions { line: usize, reason: String },

    #[error("invalid reader group {name:?}: {reason}")]
    InvalidReaderGroup { name: String, reason: String },

    #[error("findings from more than one document: {0} and {1}")]
    MixedDocuments(String, String),

    #[error("unmatched review record: platform {platform}, sentence {sentence_index}, detector {detector}, span {start}..{end}")]
    UnmatchedReviewRecord {
        platform: String,
        sentence_index: usize,
        detector: String,
        start: usize,
        end: usize,
    },

    #[error("illegal label {label:?} for detector {detector}")]
    IllegalLabel { detector: String, label: String },

    #[error("malformed review file line {line}: {reason}")]
    MalformedReview { line: usize, reason: String },

    #[error("duplicate platform {0}")]
    DuplicatePlatform(String),

    #[error("invalid assessment for {platform}: {}", violations.join("; "))]
    InvalidAssessment {
        platform: String,
        violations: Vec<String>,
    },

    #[error("assessment for {0} already stored; pass overwrite to replace it")]
    AssessmentExists(String),

    #[error("nothing to render")]
    NothingToRender,

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
