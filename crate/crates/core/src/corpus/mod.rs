//! Snapshot corpus: raw payloads on disk plus a JSON manifest recording
//! where each came from, when, and its SHA-256 digest.
//!
//! Layout under the corpus root:
//!
//! ```text
//! manifest.json
//! payloads/<platform>/<digest>.<ext>
//! ```

mod config;
mod fetch;

pub use config::{CorpusConfig, PlatformSource};
pub use fetch::{fetch_all, fetch_snapshot, FetchOptions, FetchReport, Fetcher};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PAYLOAD_DIR: &str = "payloads";
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediaKind {
    Html,
    PlainText,
}

impl MediaKind {
    pub fn extension(self) -> &'static str {
        match self {
            MediaKind::Html => "html",
            MediaKind::PlainText => "txt",
        }
    }
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Platform identifiers double as directory names.
/// Table ordering of platforms: alphabetical ignoring case, ties broken by
/// the exact string.
pub fn platform_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    a.to_lowercase()
        .cmp(&b.to_lowercase())
        .then_with(|| a.cmp(b))
}

pub fn validate_platform(platform: &str) -> Result<()> {
    let ok = !platform.is_empty()
        && platform != "."
        && platform != ".."
        && platform
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPlatform(platform.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub platform: String,
    pub source_url: String,
    pub retrieved_at: DateTime<Utc>,
    pub content_digest: String,
    pub payload_path: String,
    pub media_kind: MediaKind,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl SnapshotEntry {
    /// Builds an entry for `payload`, deriving digest and payload path.
    pub fn new(
        platform: impl Into<String>,
        source_url: impl Into<String>,
        retrieved_at: DateTime<Utc>,
        payload: &[u8],
        media_kind: MediaKind,
    ) -> Self {
        let platform = platform.into();
        let content_digest = digest_hex(payload);
        let payload_path = format!(
            "{PAYLOAD_DIR}/{platform}/{content_digest}.{}",
            media_kind.extension()
        );
        SnapshotEntry {
            platform,
            source_url: source_url.into(),
            retrieved_at,
            content_digest,
            payload_path,
            media_kind,
            extra: Map::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub schema_version: u32,
    pub created_at: DateTime<Utc>,
    pub entries: Vec<SnapshotEntry>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl CorpusManifest {
    pub fn new(created_at: DateTime<Utc>) -> Self {
        CorpusManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            created_at,
            entries: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn find(&self, platform: &str, digest: &str) -> Option<&SnapshotEntry> {
        self.entries
            .iter()
            .find(|e| e.platform == platform && e.content_digest == digest)
    }

    /// All snapshots of `platform`, oldest first.
    pub fn history(&self, platform: &str) -> Vec<&SnapshotEntry> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .filter(|e| e.platform == platform)
            .collect();
        out.sort_by_key(|e| e.retrieved_at);
        out
    }

    /// The most recent snapshot of each platform, ordered by platform id.
    pub fn latest(&self) -> Vec<&SnapshotEntry> {
        let mut by_platform: BTreeMap<&str, &SnapshotEntry> = BTreeMap::new();
        for e in &self.entries {
            match by_platform.get(e.platform.as_str()) {
                Some(cur)
                    if (cur.retrieved_at, &cur.content_digest)
                        >= (e.retrieved_at, &e.content_digest) => {}
                _ => {
                    by_platform.insert(&e.platform, e);
                }
            }
        }
        by_platform.into_values().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreOutcome {
    Stored,
    AlreadyStored,
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Adds `entry` to a copy of `manifest` after writing its payload under
/// `root`. Storing an identical (platform, digest) pair again is a no-op.
pub fn store_snapshot(
    root: &Path,
    manifest: &CorpusManifest,
    entry: SnapshotEntry,
    payload: &[u8],
) -> Result<(CorpusManifest, StoreOutcome)> {
    validate_platform(&entry.platform)?;
    let actual = digest_hex(payload);
    if actual != entry.content_digest {
        return Err(Error::DigestMismatch {
            platform: entry.platform,
            expected: entry.content_digest,
            actual,
        });
    }
    if manifest
        .find(&entry.platform, &entry.content_digest)
        .is_some()
    {
        return Ok((manifest.clone(), StoreOutcome::AlreadyStored));
    }
    if let Some(last) = manifest.history(&entry.platform).last() {
        if entry.retrieved_at < last.retrieved_at {
            return Err(Error::OutOfOrderSnapshot {
                platform: entry.platform,
                retrieved_at: entry.retrieved_at.to_rfc3339(),
            });
        }
    }

    let target = root.join(&entry.payload_path);
    let already_on_disk = std::fs::read(&target)
        .map(|bytes| digest_hex(&bytes) == entry.content_digest)
        .unwrap_or(false);
    if !already_on_disk {
        write_atomic(&target, payload)?;
    }

    let mut next = manifest.clone();
    next.entries.push(entry);
    Ok((next, StoreOutcome::Stored))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeStatus {
    Unchanged,
    Changed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeSummary {
    pub platform: String,
    pub status: ChangeStatus,
    pub digests: (String, String),
    pub retrieved_at: (DateTime<Utc>, DateTime<Utc>),
}

impl ChangeSummary {
    pub fn changed(&self) -> bool {
        self.status == ChangeStatus::Changed
    }
}

pub fn diff_snapshots(old: &SnapshotEntry, new: &SnapshotEntry) -> Result<ChangeSummary> {
    if old.platform != new.platform {
        return Err(Error::PlatformMismatch {
            left: old.platform.clone(),
            right: new.platform.clone(),
        });
    }
    let status = if old.content_digest == new.content_digest {
        ChangeStatus::Unchanged
    } else {
        ChangeStatus::Changed
    };
    Ok(ChangeSummary {
        platform: old.platform.clone(),
        status,
        digests: (old.content_digest.clone(), new.content_digest.clone()),
        retrieved_at: (old.retrieved_at, new.retrieved_at),
    })
}

/// A corpus directory with its manifest loaded. All mutation goes through
/// [`Corpus::store`], which rewrites the manifest after each new entry.
#[derive(Debug)]
pub struct Corpus {
    root: PathBuf,
    manifest: CorpusManifest,
}

impl Corpus {
    /// Opens `root`, creating an empty manifest in memory if none exists yet.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let path = root.join(MANIFEST_FILE);
        let manifest = if path.exists() {
            let raw = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            serde_json::from_str(&raw).map_err(|e| Error::json(&path, e))?
        } else {
            CorpusManifest::new(Utc::now())
        };
        Ok(Corpus { root, manifest })
    }

    /// Opens an existing corpus; a missing manifest is an error.
    pub fn open_existing(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let path = root.join(MANIFEST_FILE);
        if !path.exists() {
            return Err(Error::io(
                &path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "corpus manifest not found"),
            ));
        }
        Self::open(root)
    }

    pub fn with_manifest(root: impl Into<PathBuf>, manifest: CorpusManifest) -> Self {
        Corpus {
            root: root.into(),
            manifest,
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest(&self) -> &CorpusManifest {
        &self.manifest
    }

    pub fn store(&mut self, entry: SnapshotEntry, payload: &[u8]) -> Result<StoreOutcome> {
        let (next, outcome) = store_snapshot(&self.root, &self.manifest, entry, payload)?;
        if outcome == StoreOutcome::Stored {
            self.manifest = next;
            self.save()?;
        }
        Ok(outcome)
    }

    pub fn save(&self) -> Result<()> {
        let path = self.root.join(MANIFEST_FILE);
        let mut bytes =
            serde_json::to_vec_pretty(&self.manifest).map_err(|e| Error::json(&path, e))?;
        bytes.push(b'\n');
        write_atomic(&path, &bytes)
    }

    pub fn payload_path(&self, entry: &SnapshotEntry) -> PathBuf {
        self.root.join(&entry.payload_path)
    }

    pub fn read_payload(&self, entry: &SnapshotEntry) -> Result<Vec<u8>> {
        let path = self.payload_path(entry);
        std::fs::read(&path).map_err(|e| Error::io(&path, e))
    }

    /// Reads a payload and checks it against the recorded digest.
    pub fn read_verified(&self, entry: &SnapshotEntry) -> Result<Vec<u8>> {
        let bytes = self.read_payload(entry)?;
        let actual = digest_hex(&bytes);
        if actual != entry.content_digest {
            return Err(Error::DigestMismatch {
                platform: entry.platform.clone(),
                expected: entry.content_digest.clone(),
                actual,
            });
        }
        Ok(bytes)
    }
}
