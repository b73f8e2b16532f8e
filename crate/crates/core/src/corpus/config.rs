use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::MediaKind;
use crate::error::{Error, Result};

/// Editable list of documents to snapshot plus politeness settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    #[serde(default = "default_corpus_dir")]
    pub corpus_dir: PathBuf,
    #[serde(default = "default_user_agent")]
    pub user_agent: String,
    /// Minimum gap between two requests to the same host.
    #[serde(default = "default_delay")]
    pub request_delay_secs: f64,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    pub platforms: Vec<PlatformSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformSource {
    pub platform: String,
    pub url: String,
    /// Forces the media kind instead of trusting the Content-Type header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub media_kind: Option<MediaKind>,
}

fn default_corpus_dir() -> PathBuf {
    PathBuf::from("corpus")
}

fn default_user_agent() -> String {
    format!("consent-audit/{}", env!("CARGO_PKG_VERSION"))
}

fn default_delay() -> f64 {
    1.0
}

fn default_timeout() -> f64 {
    30.0
}

/// The shipped corpus configuration (13 platform Terms-of-Service URLs).
pub const DEFAULT_CORPUS_CONFIG: &str = include_str!("../../data/corpus.json");

impl CorpusConfig {
    pub fn from_json(raw: &str, origin: &Path) -> Result<Self> {
        let config: Self = serde_json::from_str(raw).map_err(|e| Error::json(origin, e))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&raw, path)
    }

    pub fn shipped_default() -> Self {
        Self::from_json(DEFAULT_CORPUS_CONFIG, Path::new("<builtin corpus.json>"))
            .expect("shipped corpus config is valid")
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for p in &self.platforms {
            super::validate_platform(&p.platform)?;
            if !seen.insert(p.platform.as_str()) {
                return Err(Error::DuplicatePlatform(p.platform.clone()));
            }
        }
        if self.request_delay_secs.is_nan()
            || self.request_delay_secs < 0.0
            || self.timeout_secs.is_nan()
            || self.timeout_secs <= 0.0
        {
            return Err(Error::InvalidConfig(
                "request_delay_secs must be >= 0 and timeout_secs > 0".into(),
            ));
        }
        Ok(())
    }
}
