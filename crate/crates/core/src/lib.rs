//! Auditing toolkit for platform terms-of-service documents: snapshot
//! storage, text preparation, readability, lexical clarity, specificity
//! coding with human review, and interface-assessment aggregation.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the working precision at `f64`.

pub mod clarity;
pub mod corpus;
pub mod error;
pub mod interface;
pub mod lexicon;
pub mod num;
pub mod pipeline;
pub mod readability;
pub mod report;
pub mod specificity;
pub mod textprep;

pub use clarity::{scan_vague_terms, top_terms, ClarityReport, VagueLexicon};
pub use corpus::{Corpus, CorpusConfig, CorpusManifest, MediaKind, SnapshotEntry};
pub use error::{Error, Result};
pub use interface::{aggregate_interface, validate_assessment, InterfaceAssessment};
pub use num::Scalar;
pub use pipeline::{run_pipeline, Lexicons, PipelineOptions, PipelineOutput, PlatformResult};
pub use readability::{classify_band, Band, Metric, ReaderGroup};
pub use report::{emit_figure_data, render_table, FigureKind, TableFormat, TableKind};
pub use specificity::{
    aggregate_counts, map_scores, SentenceFinding, SpecificityCounts, SpecificityScores, Stage,
};
pub use textprep::{DocStats, Document, Sentence, SyllableCounter};

/// Default working precision.
pub type Real = f64;
pub type ReadabilityProfile = readability::ReadabilityProfile<Real>;
pub type FluencyEstimate = readability::FluencyEstimate<Real>;
pub type ReadabilityProfileF32 = readability::ReadabilityProfile<f32>;
pub type FluencyEstimateF32 = readability::FluencyEstimate<f32>;
