use std::collections::HashSet;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{fold, read_lexicon_file, version_tag, PhraseMatcher};

pub const DATA_TYPES_FILE: &str = "data_types.json";
pub const ENTITIES_FILE: &str = "entities.json";
pub const RETENTION_FILE: &str = "retention.json";
pub const SHARING_FILE: &str = "sharing.json";

const DEFAULT_DATA_TYPES: &str = include_str!("../../data/lexicons/data_types.json");
const DEFAULT_ENTITIES: &str = include_str!("../../data/lexicons/entities.json");
const DEFAULT_RETENTION: &str = include_str!("../../data/lexicons/retention.json");
const DEFAULT_SHARING: &str = include_str!("../../data/lexicons/sharing.json");

/// A data-type phrase, optionally with plural or spelling variants that
/// count as the same type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataTypeEntry {
    Plain(String),
    WithVariants {
        canonical: String,
        variants: Vec<String>,
    },
}

impl DataTypeEntry {
    pub fn canonical(&self) -> &str {
        match self {
            DataTypeEntry::Plain(s) => s,
            DataTypeEntry::WithVariants { canonical, .. } => canonical,
        }
    }

    fn variants(&self) -> &[String] {
        match self {
            DataTypeEntry::Plain(_) => &[],
            DataTypeEntry::WithVariants { variants, .. } => variants,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataTypeCategory {
    pub category: String,
    pub types: Vec<DataTypeEntry>,
}

#[derive(Debug, Clone, Deserialize)]
struct EntitiesFile {
    known_entities: Vec<String>,
    corporate_suffixes: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RetentionFile {
    retention_verbs: Vec<String>,
    vague_retention_phrases: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct SharingFile {
    sharing_verbs: Vec<String>,
    specific_purpose_cues: Vec<String>,
    generic_purpose_cues: Vec<String>,
    negation_cues: Vec<String>,
}

/// Raw JSON text of the four specificity lexicon files.
#[derive(Debug, Clone, Copy)]
pub struct LexiconSources<'a> {
    pub data_types: &'a str,
    pub entities: &'a str,
    pub retention: &'a str,
    pub sharing: &'a str,
}

impl LexiconSources<'static> {
    pub const SHIPPED: LexiconSources<'static> = LexiconSources {
        data_types: DEFAULT_DATA_TYPES,
        entities: DEFAULT_ENTITIES,
        retention: DEFAULT_RETENTION,
        sharing: DEFAULT_SHARING,
    };
}

/// Compiled pattern families used by the specificity detectors.
#[derive(Debug, Clone)]
pub struct SpecificityLexicons {
    pub data_types: Vec<DataTypeCategory>,
    pub known_entities: Vec<String>,
    pub corporate_suffixes: Vec<String>,
    pub retention_verbs: Vec<String>,
    pub vague_retention_phrases: Vec<String>,
    pub sharing_verbs: Vec<String>,
    pub specific_purpose_cues: Vec<String>,
    pub generic_purpose_cues: Vec<String>,
    pub negation_cues: Vec<String>,
    pub version: String,
    pub(crate) data_type_matcher: PhraseMatcher<String>,
    pub(crate) entity_matcher: PhraseMatcher<String>,
    pub(crate) suffix_pattern: Regex,
    pub(crate) retention_verb_matcher: PhraseMatcher<()>,
    pub(crate) vague_retention_matcher: PhraseMatcher<()>,
    pub(crate) sharing_verb_matcher: PhraseMatcher<()>,
    pub(crate) specific_matcher: PhraseMatcher<()>,
    pub(crate) generic_matcher: PhraseMatcher<()>,
    pub(crate) negation_matcher: PhraseMatcher<()>,
}

fn nonempty(name: &str, list: &[String]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::InvalidLexicon {
            name: name.into(),
            reason: "list is empty".into(),
        });
    }
    if list.iter().any(|s| s.trim().is_empty()) {
        return Err(Error::InvalidLexicon {
            name: name.into(),
            reason: "blank entry".into(),
        });
    }
    Ok(())
}

fn insert_unique<T>(
    matcher: &mut PhraseMatcher<T>,
    name: &str,
    phrase: &str,
    value: T,
) -> Result<()> {
    if matcher.insert(phrase, value) {
        Ok(())
    } else {
        Err(Error::DuplicateSurfaceForm {
            name: name.into(),
            surface: phrase.into(),
        })
    }
}

fn plain_matcher(name: &str, list: &[String]) -> Result<PhraseMatcher<()>> {
    nonempty(name, list)?;
    let mut m = PhraseMatcher::new();
    for phrase in list {
        insert_unique(&mut m, name, phrase, ())?;
    }
    Ok(m)
}

/// Regular inflections of a single-word verb. Multi-word entries are
/// returned unchanged.
pub fn inflections(word: &str) -> Vec<String> {
    let w = fold(word);
    if w.contains(char::is_whitespace) || w.is_empty() {
        return vec![w];
    }
    let (stem, last) = w.split_at(w.len() - 1);
    let sibilant = ["s", "sh", "ch", "x", "z"].iter().any(|s| w.ends_with(s));
    let third = if sibilant {
        format!("{w}es")
    } else {
        format!("{w}s")
    };
    let (past, ing) = if last == "e" {
        (
            format!("{w}d"),
            if w.ends_with("ee") {
                format!("{w}ing")
            } else {
                format!("{stem}ing")
            },
        )
    } else {
        (format!("{w}ed"), format!("{w}ing"))
    };
    vec![w, third, past, ing]
}

/// Verb matcher: listed forms must be unique; generated inflections that
/// collide with a listed form are dropped.
fn verb_matcher(name: &str, list: &[String]) -> Result<PhraseMatcher<()>> {
    let mut m = plain_matcher(name, list)?;
    for verb in list {
        for form in inflections(verb).into_iter().skip(1) {
            m.insert(&form, ());
        }
    }
    Ok(m)
}

fn suffix_regex(suffixes: &[String]) -> Result<Regex> {
    let alts: Vec<String> = suffixes.iter().map(|s| regex::escape(s.trim())).collect();
    let name = r"[A-Z][\p{L}\p{N}&'’\-]*";
    let pattern = format!(
        r"\b{name}(?:[ \t]+{name})*,?[ \t]+(?:{})\b\.?",
        alts.join("|")
    );
    Regex::new(&pattern).map_err(|e| Error::InvalidLexicon {
        name: "corporate suffixes".into(),
        reason: e.to_string(),
    })
}

fn parse<T: serde::de::DeserializeOwned>(raw: &str, file: &str) -> Result<T> {
    serde_json::from_str(raw).map_err(|e| Error::json(Path::new(file), e))
}

impl SpecificityLexicons {
    pub fn from_sources(src: LexiconSources<'_>) -> Result<Self> {
        let data_types: Vec<DataTypeCategory> = parse(src.data_types, DATA_TYPES_FILE)?;
        let entities: EntitiesFile = parse(src.entities, ENTITIES_FILE)?;
        let retention: RetentionFile = parse(src.retention, RETENTION_FILE)?;
        let sharing: SharingFile = parse(src.sharing, SHARING_FILE)?;

        if data_types.is_empty() {
            return Err(Error::InvalidLexicon {
                name: "data types".into(),
                reason: "no categories".into(),
            });
        }
        let mut data_type_matcher = PhraseMatcher::new();
        for cat in &data_types {
            if cat.types.is_empty() {
                return Err(Error::InvalidLexicon {
                    name: "data types".into(),
                    reason: format!("category {} is empty", cat.category),
                });
            }
            for entry in &cat.types {
                let canonical = entry.canonical().to_string();
                for surface in std::iter::once(entry.canonical())
                    .chain(entry.variants().iter().map(String::as_str))
                {
                    if surface.trim().is_empty() {
                        return Err(Error::InvalidLexicon {
                            name: "data types".into(),
                            reason: format!("blank entry in category {}", cat.category),
                        });
                    }
                    insert_unique(
                        &mut data_type_matcher,
                        "data types",
                        surface,
                        canonical.clone(),
                    )?;
                }
            }
        }

        nonempty("known entities", &entities.known_entities)?;
        let mut entity_matcher = PhraseMatcher::new();
        for name in &entities.known_entities {
            insert_unique(&mut entity_matcher, "known entities", name, name.clone())?;
        }
        nonempty("corporate suffixes", &entities.corporate_suffixes)?;
        let mut seen = HashSet::new();
        for s in &entities.corporate_suffixes {
            if !seen.insert(fold(s)) {
                return Err(Error::DuplicateSurfaceForm {
                    name: "corporate suffixes".into(),
                    surface: s.clone(),
                });
            }
        }
        let suffix_pattern = suffix_regex(&entities.corporate_suffixes)?;

        let retention_verb_matcher = verb_matcher("retention verbs", &retention.retention_verbs)?;
        let vague_retention_matcher = plain_matcher(
            "vague retention phrases",
            &retention.vague_retention_phrases,
        )?;
        let sharing_verb_matcher = verb_matcher("sharing verbs", &sharing.sharing_verbs)?;
        let specific_matcher =
            plain_matcher("specific purpose cues", &sharing.specific_purpose_cues)?;
        let generic_matcher = plain_matcher("generic purpose cues", &sharing.generic_purpose_cues)?;
        let negation_matcher = plain_matcher("negation cues", &sharing.negation_cues)?;

        let combined = [src.data_types, src.entities, src.retention, src.sharing].join("\n");
        Ok(SpecificityLexicons {
            data_types,
            known_entities: entities.known_entities,
            corporate_suffixes: entities.corporate_suffixes,
            retention_verbs: retention.retention_verbs,
            vague_retention_phrases: retention.vague_retention_phrases,
            sharing_verbs: sharing.sharing_verbs,
            specific_purpose_cues: sharing.specific_purpose_cues,
            generic_purpose_cues: sharing.generic_purpose_cues,
            negation_cues: sharing.negation_cues,
            version: version_tag(combined.as_bytes()),
            data_type_matcher,
            entity_matcher,
            suffix_pattern,
            retention_verb_matcher,
            vague_retention_matcher,
            sharing_verb_matcher,
            specific_matcher,
            generic_matcher,
            negation_matcher,
        })
    }

    pub fn shipped_default() -> Self {
        Self::from_sources(LexiconSources::SHIPPED).expect("shipped specificity lexicons are valid")
    }

    /// Loads the four lexicon files from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let data_types = read_lexicon_file(&dir.join(DATA_TYPES_FILE))?;
        let entities = read_lexicon_file(&dir.join(ENTITIES_FILE))?;
        let retention = read_lexicon_file(&dir.join(RETENTION_FILE))?;
        let sharing = read_lexicon_file(&dir.join(SHARING_FILE))?;
        Self::from_sources(LexiconSources {
            data_types: &data_types,
            entities: &entities,
            retention: &retention,
            sharing: &sharing,
        })
    }

    /// Canonical data-type names in lexicon order.
    pub fn data_type_names(&self) -> impl Iterator<Item = &str> {
        self.data_types
            .iter()
            .flat_map(|c| c.types.iter().map(DataTypeEntry::canonical))
    }
}
