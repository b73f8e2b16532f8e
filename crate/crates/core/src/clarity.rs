//! Lexical clarity: vague and non-committal term detection.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{fold, read_lexicon_file, version_tag, PhraseMatcher};
use crate::num::{percent, Scalar};
use crate::textprep::{Document, Span};

pub const VAGUE_TERMS_FILE: &str = "vague_terms.json";
pub const DEFAULT_VAGUE_TERMS: &str = include_str!("../data/lexicons/vague_terms.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VagueCategory {
    /// Softens or conditions a commitment ("may", "necessary").
    Uncertainty,
    /// Hides who receives data ("third parties", "others").
    ActorAmbiguity,
    /// Blurs which data or cases are covered ("some", "certain").
    ScopeAmbiguity,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VagueTerm {
    pub canonical: String,
    #[serde(default)]
    pub variants: Vec<String>,
    pub category: VagueCategory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Surface {
    term: usize,
    variant: bool,
}

#[derive(Debug, Clone)]
pub struct VagueLexicon {
    pub terms: Vec<VagueTerm>,
    pub version: String,
    matcher: PhraseMatcher<Surface>,
}

impl VagueLexicon {
    pub fn new(terms: Vec<VagueTerm>, version: impl Into<String>) -> Result<Self> {
        const NAME: &str = "vague terms";
        let mut matcher = PhraseMatcher::new();
        for (idx, term) in terms.iter().enumerate() {
            let surfaces = std::iter::once((&term.canonical, false))
                .chain(term.variants.iter().map(|v| (v, true)));
            for (surface, variant) in surfaces {
                if surface.trim().is_empty() {
                    return Err(Error::InvalidLexicon {
                        name: NAME.into(),
                        reason: format!("empty term or variant in entry {}", idx + 1),
                    });
                }
                if !matcher.insert(surface, Surface { term: idx, variant }) {
                    return Err(Error::DuplicateSurfaceForm {
                        name: NAME.into(),
                        surface: surface.clone(),
                    });
                }
            }
        }
        Ok(VagueLexicon {
            terms,
            version: version.into(),
            matcher,
        })
    }

    pub fn from_json_str(raw: &str, origin: &Path) -> Result<Self> {
        let terms: Vec<VagueTerm> =
            serde_json::from_str(raw).map_err(|e| Error::json(origin, e))?;
        Self::new(terms, version_tag(raw.as_bytes()))
    }

    /// The shipped 30-term lexicon.
    pub fn shipped_default() -> Self {
        Self::from_json_str(DEFAULT_VAGUE_TERMS, Path::new("<builtin vague_terms.json>"))
            .expect("shipped vague-term lexicon is valid")
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, canonical: &str) -> Option<&VagueTerm> {
        let key = fold(canonical);
        self.terms.iter().find(|t| fold(&t.canonical) == key)
    }
}

pub fn load_vague_lexicon(path: &Path) -> Result<VagueLexicon> {
    let raw = read_lexicon_file(path)?;
    VagueLexicon::from_json_str(&raw, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Whether "similar term" variants count. They are always attributed to
    /// their canonical term and reported separately in `per_surface_counts`.
    pub match_variants: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            match_variants: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VagueMatch {
    pub sentence_index: usize,
    /// Byte span within the document text.
    pub span: Span,
    pub canonical: String,
    pub surface: String,
    pub variant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarityReport {
    pub platform: String,
    pub word_count: usize,
    pub vague_count: usize,
    pub density_pct: f64,
    pub unique_terms: usize,
    pub per_term_counts: BTreeMap<String, usize>,
    /// Counts keyed by the matched lexicon surface (canonical or variant).
    pub per_surface_counts: BTreeMap<String, usize>,
    pub matches: Vec<VagueMatch>,
}

impl ClarityReport {
    /// Density in any scalar type.
    pub fn density<F: Scalar>(&self) -> F {
        percent(self.vague_count, self.word_count)
    }
}

pub fn scan_vague_terms(doc: &Document, lex: &VagueLexicon) -> ClarityReport {
    scan_vague_terms_with(doc, lex, ScanOptions::default())
}

/// Scans each sentence independently, so no match crosses a sentence
/// boundary. Each multi-word match is one occurrence.
pub fn scan_vague_terms_with(
    doc: &Document,
    lex: &VagueLexicon,
    options: ScanOptions,
) -> ClarityReport {
    let mut matches = Vec::new();
    let mut per_term_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_surface_counts: BTreeMap<String, usize> = BTreeMap::new();

    for sentence in &doc.sentences {
        for hit in lex.matcher.find_all(&sentence.text, &sentence.tokens) {
            if hit.value.variant && !options.match_variants {
                continue;
            }
            let term = &lex.terms[hit.value.term];
            let surface = fold(
                &sentence.text[hit.span.start..hit.span.end]
                    .split_whitespace()
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            *per_term_counts.entry(term.canonical.clone()).or_default() += 1;
            *per_surface_counts.entry(surface.clone()).or_default() += 1;
            let base = sentence.char_span.start;
            matches.push(VagueMatch {
                sentence_index: sentence.index,
                span: Span::new(base + hit.span.start, base + hit.span.end),
                canonical: term.canonical.clone(),
                surface,
                variant: hit.value.variant,
            });
        }
    }

    let vague_count = matches.len();
    let word_count = doc.stats.word_count;
    let unique: HashSet<&str> = matches.iter().map(|m| m.canonical.as_str()).collect();
    ClarityReport {
        platform: doc.platform.clone(),
        word_count,
        vague_count,
        density_pct: percent(vague_count, word_count),
        unique_terms: unique.len(),
        per_term_counts,
        per_surface_counts,
        matches,
    }
}

/// The `k` most frequent canonical terms, ties broken alphabetically.
pub fn top_terms(report: &ClarityReport, k: usize) -> Vec<(String, usize)> {
    let mut counts: Vec<(String, usize)> = report
        .per_term_counts
        .iter()
        .map(|(t, &n)| (t.clone(), n))
        .collect();
    counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    counts.truncate(k);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::SyllableCounter;

    fn doc(text: &str) -> Document {
        Document::from_text("P", text, &SyllableCounter::new())
    }

    #[test]
    fn shipped_lexicon_has_thirty_terms() {
        let lex = VagueLexicon::shipped_default();
        assert_eq!(lex.len(), 30);
        assert_eq!(
            lex.term("may").unwrap().category,
            VagueCategory::Uncertainty
        );
        assert_eq!(
            lex.term("third parties").unwrap().category,
            VagueCategory::ActorAmbiguity
        );
        assert_eq!(
            lex.term("personal information").unwrap().category,
            VagueCategory::ScopeAmbiguity
        );
        assert_eq!(lex.term("services").unwrap().category, VagueCategory::Other);
    }

    #[test]
    fn duplicate_surface_form_rejected() {
        let raw = r#"[{"canonical":"may","variants":[],"category":"uncertainty"},
                      {"canonical":"might","variants":["MAY"],"category":"uncertainty"}]"#;
        let err = VagueLexicon::from_json_str(raw, Path::new("t")).unwrap_err();
        assert!(err.to_string().contains("duplicate surface form"), "{err}");
    }

    #[test]
    fn empty_term_rejected_and_category_parsed() {
        let raw = r#"[{"canonical":" ","variants":[],"category":"other"}]"#;
        assert!(VagueLexicon::from_json_str(raw, Path::new("t")).is_err());
        let ok = r#"[{"canonical":"may","category":"uncertainty"}]"#;
        let lex = VagueLexicon::from_json_str(ok, Path::new("t")).unwrap();
        assert_eq!(lex.terms[0].category, VagueCategory::Uncertainty);
        assert!(VagueLexicon::from_json_str("{", Path::new("t")).is_err());
    }

    #[test]
    fn missing_file_is_lexicon_not_found() {
        let err = load_vague_lexicon(Path::new("/nonexistent/vague_terms.json")).unwrap_err();
        assert!(matches!(err, Error::LexiconNotFound(_)));
    }

    #[test]
    fn nesting_example() {
        let lex = VagueLexicon::shipped_default();
        let r = scan_vague_terms(
            &doc("We may share certain information with third parties."),
            &lex,
        );
        let found: Vec<&str> = r.matches.iter().map(|m| m.canonical.as_str()).collect();
        assert_eq!(found, ["may", "certain information", "third parties"]);
        assert_eq!(r.word_count, 8);
        assert_eq!(r.vague_count, 3);
        assert_eq!(r.density_pct, 37.5);
        assert_eq!(r.unique_terms, 3);
    }

    #[test]
    fn variants_attributed_and_switchable() {
        let lex = VagueLexicon::shipped_default();
        let d = doc("Vendors could occasionally see it.");
        let r = scan_vague_terms(&d, &lex);
        assert_eq!(r.per_term_counts["third parties"], 1);
        assert_eq!(r.per_term_counts["may"], 1);
        assert_eq!(r.per_term_counts["time to time"], 1);
        assert_eq!(r.per_surface_counts["vendors"], 1);
        let strict = scan_vague_terms_with(
            &d,
            &lex,
            ScanOptions {
                match_variants: false,
            },
        );
        assert_eq!(strict.vague_count, 0);
    }

    #[test]
    fn no_hits() {
        let r = scan_vague_terms(
            &doc("The cat sat on the mat."),
            &VagueLexicon::shipped_default(),
        );
        assert_eq!((r.vague_count, r.unique_terms), (0, 0));
        assert_eq!(r.density_pct, 0.0);
        let empty = scan_vague_terms(&doc(""), &VagueLexicon::shipped_default());
        assert_eq!(empty.density_pct, 0.0);
    }

    #[test]
    fn matches_do_not_cross_sentences() {
        let r = scan_vague_terms(
            &doc("We sell to a third. Party time."),
            &VagueLexicon::shipped_default(),
        );
        assert!(r.matches.iter().all(|m| m.canonical != "third party"));
    }

    #[test]
    fn top_terms_order_and_ties() {
        let mut report = scan_vague_terms(&doc(""), &VagueLexicon::shipped_default());
        report.per_term_counts = [("other".to_string(), 3), ("may".to_string(), 5)].into();
        assert_eq!(
            top_terms(&report, 15),
            [("may".to_string(), 5), ("other".to_string(), 3)]
        );
        report.per_term_counts = [("b".to_string(), 2), ("a".to_string(), 2)].into();
        assert_eq!(
            top_terms(&report, 2),
            [("a".to_string(), 2), ("b".to_string(), 2)]
        );
        assert_eq!(top_terms(&report, 1).len(), 1);
    }

    #[test]
    fn density_generic() {
        let mut report = scan_vague_terms(&doc(""), &VagueLexicon::shipped_default());
        report.vague_count = 364;
        report.word_count = 5073;
        let d64: f64 = report.density();
        let d32: f32 = report.density();
        assert!((d64 - 7.18).abs() < 0.005);
        assert!((d32 as f64 - d64).abs() < 1e-4);
    }
}
