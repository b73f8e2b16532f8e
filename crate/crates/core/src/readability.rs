//! Readability formulas, difficulty bands and reading-time estimates.
//!
//! Everything here is generic over [`Scalar`]; the crate root exposes `f64`
//! aliases.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::textprep::DocStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    FleschReadingEase,
    GunningFog,
    FleschKincaidGrade,
    ColemanLiau,
    Smog,
    Lensear,
    Ari,
}

impl Metric {
    /// Column order of the readability table.
    pub const ALL: [Metric; 7] = [
        Metric::FleschReadingEase,
        Metric::GunningFog,
        Metric::FleschKincaidGrade,
        Metric::ColemanLiau,
        Metric::Smog,
        Metric::Lensear,
        Metric::Ari,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Metric::FleschReadingEase => "Flesch-RE",
            Metric::GunningFog => "Fog",
            Metric::FleschKincaidGrade => "F-K Grade",
            Metric::ColemanLiau => "CLI",
            Metric::Smog => "SMOG",
            Metric::Lensear => "Lensear",
            Metric::Ari => "ARI",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Metric::FleschReadingEase => "flesch_reading_ease",
            Metric::GunningFog => "gunning_fog",
            Metric::FleschKincaidGrade => "flesch_kincaid_grade",
            Metric::ColemanLiau => "coleman_liau",
            Metric::Smog => "smog",
            Metric::Lensear => "lensear",
            Metric::Ari => "ari",
        }
    }

    /// Higher scores mean easier text only for Flesch Reading Ease.
    pub fn higher_is_easier(self) -> bool {
        self == Metric::FleschReadingEase
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityProfile<F> {
    pub flesch_reading_ease: F,
    pub gunning_fog: F,
    pub flesch_kincaid_grade: F,
    pub coleman_liau: F,
    pub smog: F,
    pub lensear: F,
    pub ari: F,
}

impl<F: Scalar> ReadabilityProfile<F> {
    pub fn get(&self, metric: Metric) -> F {
        match metric {
            Metric::FleschReadingEase => self.flesch_reading_ease,
            Metric::GunningFog => self.gunning_fog,
            Metric::FleschKincaidGrade => self.flesch_kincaid_grade,
            Metric::ColemanLiau => self.coleman_liau,
            Metric::Smog => self.smog,
            Metric::Lensear => self.lensear,
            Metric::Ari => self.ari,
        }
    }

    pub fn bands(&self) -> Vec<ReadabilityBand> {
        Metric::ALL
            .iter()
            .map(|&m| classify_band(m, self.get(m)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LensearVariant {
    /// `(easy + 3 * hard) / sentences` with no further adjustment.
    #[default]
    AsPublished,
    /// Classical Linsear Write: halve when above 20, else subtract 2 then halve.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReadabilityOptions {
    pub lensear: LensearVariant,
}

pub fn compute_readability_profile<F: Scalar>(stats: &DocStats) -> Result<ReadabilityProfile<F>> {
    compute_readability_profile_with(stats, ReadabilityOptions::default())
}

pub fn compute_readability_profile_with<F: Scalar>(
    stats: &DocStats,
    options: ReadabilityOptions,
) -> Result<ReadabilityProfile<F>> {
    if stats.word_count == 0 || stats.sentence_count == 0 {
        return Err(Error::DegenerateDocument(format!(
            "{} words, {} sentences",
            stats.word_count, stats.sentence_count
        )));
    }
    let c = F::lit;
    let words = F::count(stats.word_count);
    let sentences = F::count(stats.sentence_count);
    let words_per_sentence = words / sentences;
    let syllables_per_word = F::count(stats.syllable_count) / words;
    let hundred = c(100.0);
    let letters_per_100 = hundred * F::count(stats.letter_count) / words;
    let sentences_per_100 = hundred * sentences / words;

    let lensear_raw =
        (F::count(stats.easy_word_count) + c(3.0) * F::count(stats.hard_word_count)) / sentences;
    let lensear = match options.lensear {
        LensearVariant::AsPublished => lensear_raw,
        LensearVariant::Classical if lensear_raw > c(20.0) => lensear_raw / c(2.0),
        LensearVariant::Classical => (lensear_raw - c(2.0)) / c(2.0),
    };

    Ok(ReadabilityProfile {
        flesch_reading_ease: c(206.835)
            - c(1.015) * words_per_sentence
            - c(84.6) * syllables_per_word,
        gunning_fog: c(0.4)
            * (words_per_sentence + hundred * F::count(stats.complex_word_count) / words),
        flesch_kincaid_grade: c(0.39) * words_per_sentence + c(11.8) * syllables_per_word
            - c(15.59),
        coleman_liau: c(0.0588) * letters_per_100 - c(0.296) * sentences_per_100 - c(15.8),
        smog: c(1.0430) * (F::count(stats.polysyllable_count) * c(30.0) / sentences).sqrt()
            + c(3.1291),
        lensear,
        ari: c(4.71) * (F::count(stats.character_count) / words) + c(0.5) * words_per_sentence
            - c(21.43),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Easy,
    Moderate,
    Hard,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Easy => "easy",
            Band::Moderate => "moderate",
            Band::Hard => "hard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadabilityBand {
    pub metric: Metric,
    pub band: Band,
}

/// Grade-type cutoffs: easy at or below the first value, hard at or above
/// the second, moderate in between.
fn grade_cutoffs(metric: Metric) -> (f64, f64) {
    match metric {
        Metric::GunningFog => (8.0, 12.0),
        Metric::FleschKincaidGrade | Metric::ColemanLiau | Metric::Smog => (8.0, 13.0),
        Metric::Lensear | Metric::Ari => (9.0, 13.0),
        Metric::FleschReadingEase => unreachable!("Flesch Reading Ease is not grade-type"),
    }
}

/// Total over all inputs; NaN classifies as hard.
pub fn classify_band<F: Scalar>(metric: Metric, score: F) -> ReadabilityBand {
    let band = if metric == Metric::FleschReadingEase {
        if score >= F::lit(60.0) {
            Band::Easy
        } else if score >= F::lit(30.0) {
            Band::Moderate
        } else {
            Band::Hard
        }
    } else {
        let (easy_max, hard_min) = grade_cutoffs(metric);
        if score <= F::lit(easy_max) {
            Band::Easy
        } else if score < F::lit(hard_min) {
            Band::Moderate
        } else {
            Band::Hard
        }
    };
    ReadabilityBand { metric, band }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReaderGroup {
    pub name: String,
    pub wpm_low: f64,
    pub wpm_high: f64,
}

impl ReaderGroup {
    pub fn new(name: impl Into<String>, wpm_low: f64, wpm_high: f64) -> Result<Self> {
        let group = ReaderGroup {
            name: name.into(),
            wpm_low,
            wpm_high,
        };
        group.validate()?;
        Ok(group)
    }

    fn validate(&self) -> Result<()> {
        let ordered =
            self.wpm_low > 0.0 && self.wpm_low <= self.wpm_high && self.wpm_high.is_finite();
        if !ordered {
            return Err(Error::InvalidReaderGroup {
                name: self.name.clone(),
                reason: format!(
                    "need 0 < wpm_low <= wpm_high, got {}..{}",
                    self.wpm_low, self.wpm_high
                ),
            });
        }
        Ok(())
    }
}

pub const READER_GROUPS_FILE: &str = "reader_groups.json";
pub const DEFAULT_READER_GROUPS: &str = include_str!("../data/reader_groups.json");

pub fn reader_groups_from_json(raw: &str, origin: &Path) -> Result<Vec<ReaderGroup>> {
    let groups: Vec<ReaderGroup> = serde_json::from_str(raw).map_err(|e| Error::json(origin, e))?;
    for g in &groups {
        g.validate()?;
    }
    Ok(groups)
}

/// Children oral 120–128, adult oral 183, adult silent 238 words per minute.
pub fn default_reader_groups() -> Vec<ReaderGroup> {
    reader_groups_from_json(
        DEFAULT_READER_GROUPS,
        Path::new("<builtin reader_groups.json>"),
    )
    .expect("shipped reader groups are valid")
}

pub fn load_reader_groups(path: &Path) -> Result<Vec<ReaderGroup>> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    reader_groups_from_json(&raw, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluencyEstimate<F> {
    pub minutes_low: F,
    pub minutes_high: F,
}

/// Minutes to read `word_count` words; the faster bound gives `minutes_low`.
pub fn estimate_reading_time<F: Scalar>(
    word_count: usize,
    group: &ReaderGroup,
) -> FluencyEstimate<F> {
    let words = F::count(word_count);
    FluencyEstimate {
        minutes_low: words / F::lit(group.wpm_high),
        minutes_high: words / F::lit(group.wpm_low),
    }
}
