use std::collections::{BTreeMap, HashMap};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use chrono::Utc;
use url::Url;

use super::{Corpus, CorpusConfig, MediaKind, SnapshotEntry, StoreOutcome};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub timeout: Duration,
    pub user_agent: String,
    pub request_delay: Duration,
}

impl FetchOptions {
    pub fn from_config(config: &CorpusConfig) -> Self {
        FetchOptions {
            timeout: Duration::from_secs_f64(config.timeout_secs),
            user_agent: config.user_agent.clone(),
            request_delay: Duration::from_secs_f64(config.request_delay_secs),
        }
    }
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            timeout: Duration::from_secs(30),
            user_agent: format!("consent-audit/{}", env!("CARGO_PKG_VERSION")),
            request_delay: Duration::from_secs(1),
        }
    }
}

fn parse_http_url(url: &str) -> Result<Url> {
    let parsed = Url::parse(url).map_err(|e| Error::InvalidUrl {
        url: url.to_string(),
        reason: e.to_string(),
    })?;
    match parsed.scheme() {
        "http" | "https" if parsed.host_str().is_some() => Ok(parsed),
        other => Err(Error::InvalidUrl {
            url: url.to_string(),
            reason: format!("unsupported scheme {other:?}"),
        }),
    }
}

fn sniff_media_kind(content_type: Option<&str>, body: &[u8]) -> MediaKind {
    match content_type.map(str::to_ascii_lowercase) {
        Some(ct) if ct.contains("html") || ct.contains("xml") => MediaKind::Html,
        Some(ct) if ct.starts_with("text/plain") => MediaKind::PlainText,
        _ => {
            let head = String::from_utf8_lossy(&body[..body.len().min(512)]);
            if head.trim_start().starts_with('<') {
                MediaKind::Html
            } else {
                MediaKind::PlainText
            }
        }
    }
}

fn map_reqwest(url: &str, err: reqwest::Error) -> Error {
    if err.is_timeout() {
        return Error::Timeout {
            url: url.to_string(),
        };
    }
    let mut reason = err.to_string();
    let mut source = std::error::Error::source(&err);
    while let Some(s) = source {
        reason.push_str(": ");
        reason.push_str(&s.to_string());
        source = s.source();
    }
    Error::Network {
        url: url.to_string(),
        reason,
    }
}

/// HTTP client that keeps at least `request_delay` between two requests to
/// the same host.
pub struct Fetcher {
    client: reqwest::blocking::Client,
    options: FetchOptions,
    last_request: HashMap<String, Instant>,
}

impl Fetcher {
    pub fn new(options: FetchOptions) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(options.timeout)
            .user_agent(options.user_agent.clone())
            .build()
            .map_err(|e| Error::Network {
                url: String::new(),
                reason: e.to_string(),
            })?;
        Ok(Fetcher {
            client,
            options,
            last_request: HashMap::new(),
        })
    }

    pub fn fetch(
        &mut self,
        platform: &str,
        url: &str,
        forced_kind: Option<MediaKind>,
    ) -> Result<(SnapshotEntry, Vec<u8>)> {
        super::validate_platform(platform)?;
        let parsed = parse_http_url(url)?;
        let host = parsed.host_str().unwrap_or_default().to_string();
        if let Some(prev) = self.last_request.get(&host) {
            let elapsed = prev.elapsed();
            if elapsed < self.options.request_delay {
                std::thread::sleep(self.options.request_delay - elapsed);
            }
        }
        self.last_request.insert(host, Instant::now());

        let response = self
            .client
            .get(parsed)
            .send()
            .map_err(|e| map_reqwest(url, e))?;
        let status = response.status();
        if !status.is_success() {
            return Err(Error::HttpStatus {
                url: url.to_string(),
                status: status.as_u16(),
            });
        }
        let content_type = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .map(str::to_string);
        let body = response.bytes().map_err(|e| map_reqwest(url, e))?.to_vec();
        let kind = forced_kind.unwrap_or_else(|| sniff_media_kind(content_type.as_deref(), &body));
        let entry = SnapshotEntry::new(platform, url, Utc::now(), &body, kind);
        Ok((entry, body))
    }
}

/// Fetches one URL with a fresh client. The payload is returned verbatim
/// alongside an entry carrying its digest.
pub fn fetch_snapshot(
    platform: &str,
    url: &str,
    options: &FetchOptions,
) -> Result<(SnapshotEntry, Vec<u8>)> {
    Fetcher::new(options.clone())?.fetch(platform, url, None)
}

#[derive(Debug)]
pub struct FetchReport {
    pub platform: String,
    pub result: Result<StoreOutcome>,
}

/// Fetches every configured platform (or only `only`) and stores each
/// snapshot in `corpus`. Hosts are fetched concurrently, requests to the same
/// host sequentially; the corpus is written from the calling thread only.
pub fn fetch_all(
    config: &CorpusConfig,
    corpus: &mut Corpus,
    only: Option<&str>,
) -> Vec<FetchReport> {
    let options = FetchOptions::from_config(config);
    let mut by_host: BTreeMap<String, Vec<_>> = BTreeMap::new();
    let mut reports = Vec::new();
    for source in config
        .platforms
        .iter()
        .filter(|p| only.is_none_or(|o| o == p.platform))
    {
        match parse_http_url(&source.url) {
            Ok(u) => by_host
                .entry(u.host_str().unwrap_or_default().to_string())
                .or_default()
                .push(source),
            Err(e) => reports.push(FetchReport {
                platform: source.platform.clone(),
                result: Err(e),
            }),
        }
    }

    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for sources in by_host.values() {
            let tx = tx.clone();
            let options = options.clone();
            scope.spawn(move || {
                let mut fetcher = match Fetcher::new(options) {
                    Ok(f) => f,
                    Err(e) => {
                        let msg = e.to_string();
                        for s in sources {
                            let _ = tx.send((
                                s.platform.clone(),
                                Err(Error::Network {
                                    url: s.url.clone(),
                                    reason: msg.clone(),
                                }),
                            ));
                        }
                        return;
                    }
                };
                for s in sources {
                    let _ = tx.send((
                        s.platform.clone(),
                        fetcher.fetch(&s.platform, &s.url, s.media_kind),
                    ));
                }
            });
        }
        drop(tx);
        for (platform, fetched) in rx {
            let result = fetched.and_then(|(entry, body)| corpus.store(entry, &body));
            reports.push(FetchReport { platform, result });
        }
    });
    reports.sort_by(|a, b| a.platform.cmp(&b.platform));
    reports
}
