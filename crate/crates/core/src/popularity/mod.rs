//! Popularity (thematic fame) as a per-title count from a pluggable provider.
//!
//! The default provider reads a fixed snapshot (`Title,Popularity` CSV). The HTTP
//! provider fills a URL template, extracts the result count from the response body
//! with a regular expression, rate-limits requests and caches results on disk.

mod cache;
mod http;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::ingest::CorpusIndex;

pub use cache::{read_cache, write_cache, CACHE_HEADER};
pub use http::{build_query_url, extract_count, HttpProvider, RateLimiter, Transport, UreqTransport};

pub const STATIC_HEADER: [&str; 2] = ["Title", "Popularity"];
pub const STATIC_PROVIDER_TAG: &str = "static-csv";
pub const HTTP_PROVIDER_TAG: &str = "http";

#[derive(Debug, Error)]
pub enum PopularityError {
    #[error("no popularity entry for title {0:?}")]
    MissingTitle(String),
    #[error("request for {title:?} failed: {message}")]
    NetworkError { title: String, message: String },
    #[error("result count not found in response for {0:?}")]
    PatternMiss(String),
    #[error("invalid provider config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {message}")]
    BadFile { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct PopularityRecord {
    /// Full-length piece title.
    pub title: String,
    pub count: u64,
    pub fetched_at: DateTime<Utc>,
    pub provider: String,
}

/// Equality ignores `fetched_at`.
impl PartialEq for PopularityRecord {
    fn eq(&self, other: &Self) -> bool {
        self.title == other.title && self.count == other.count && self.provider == other.provider
    }
}

impl Eq for PopularityRecord {}

#[derive(Debug, Clone, PartialEq)]
pub struct HttpConfig {
    /// URL containing exactly one `{query}` placeholder.
    pub endpoint_template: String,
    /// Regular expression; the first capture group (or the whole match) holds the count.
    pub count_pattern: String,
    pub min_interval: Duration,
    pub cache_path: Option<PathBuf>,
    /// Cached records older than this are refetched. `None` keeps them forever.
    pub cache_ttl: Option<Duration>,
    pub user_agent: String,
    /// Wrap titles in double quotes for exact-phrase queries.
    pub quote_titles: bool,
}

impl HttpConfig {
    pub fn new(endpoint_template: impl Into<String>, count_pattern: impl Into<String>) -> Self {
        HttpConfig {
            endpoint_template: endpoint_template.into(),
            count_pattern: count_pattern.into(),
            min_interval: Duration::from_secs(1),
            cache_path: None,
            cache_ttl: None,
            user_agent: concat!("melodic/", env!("CARGO_PKG_VERSION")).to_string(),
            quote_titles: false,
        }
    }

    pub fn validate(&self) -> Result<(), PopularityError> {
        let placeholders = self.endpoint_template.matches("{query}").count();
        if placeholders != 1 {
            return Err(PopularityError::InvalidConfig(format!(
                "endpoint template must contain exactly one {{query}}, found {placeholders}"
            )));
        }
        if self.min_interval < Duration::from_secs(1) {
            return Err(PopularityError::InvalidConfig(format!(
                "min_interval {:?} is below one second",
                self.min_interval
            )));
        }
        regex::Regex::new(&self.count_pattern)
            .map_err(|e| PopularityError::InvalidConfig(format!("count pattern: {e}")))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProviderConfig {
    StaticCsv { path: PathBuf },
    Http(HttpConfig),
}

/// Title → count table loaded from a `Title,Popularity` CSV.
#[derive(Debug, Clone)]
pub struct StaticTable {
    counts: HashMap<String, u64>,
    snapshot_time: DateTime<Utc>,
}

/// Parses a count after dropping thousands separators (`,` `.` `'` `_`, spaces).
pub fn parse_count(raw: &str) -> Option<u64> {
    let digits: String =
        raw.trim().chars().filter(|c| !matches!(c, ',' | '.' | '\'' | '_' | ' ' | '\u{a0}' | '\u{202f}')).collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl StaticTable {
    pub fn load(path: &Path) -> Result<Self, PopularityError> {
        let bad = |message: String| PopularityError::BadFile { path: path.to_path_buf(), message };
        let file =
            std::fs::File::open(path).map_err(|source| PopularityError::Io { path: path.to_path_buf(), source })?;
        let snapshot_time = file
            .metadata()
            .and_then(|m| m.modified())
            .map(DateTime::<Utc>::from)
            .unwrap_or(DateTime::<Utc>::UNIX_EPOCH);
        let mut reader = csv::Reader::from_reader(file);
        let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let (Some(ti), Some(pi)) = (col(STATIC_HEADER[0]), col(STATIC_HEADER[1])) else {
            return Err(bad(format!("expected header {}", STATIC_HEADER.join(","))));
        };
        let mut counts = HashMap::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let title = rec.get(ti).unwrap_or("").to_string();
            let raw = rec.get(pi).unwrap_or("");
            let count = parse_count(raw).ok_or_else(|| bad(format!("row {}: bad count {raw:?}", i + 1)))?;
            counts.insert(title, count);
        }
        Ok(StaticTable { counts, snapshot_time })
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, u64)>>(pairs: I) -> Self {
        StaticTable { counts: pairs.into_iter().collect(), snapshot_time: DateTime::<Utc>::UNIX_EPOCH }
    }

    pub fn lookup(&self, title: &str) -> Result<PopularityRecord, PopularityError> {
        let count = *self.counts.get(title).ok_or_else(|| PopularityError::MissingTitle(title.to_string()))?;
        Ok(PopularityRecord {
            title: title.to_string(),
            count,
            fetched_at: self.snapshot_time,
            provider: STATIC_PROVIDER_TAG.to_string(),
        })
    }
}

pub enum Provider {
    Static(StaticTable),
    Http(HttpProvider),
}

impl Provider {
    pub fn from_config(config: &ProviderConfig) -> Result<Self, PopularityError> {
        match config {
            ProviderConfig::StaticCsv { path } => Ok(Provider::Static(StaticTable::load(path)?)),
            ProviderConfig::Http(cfg) => Ok(Provider::Http(HttpProvider::new(cfg.clone(), Box::new(UreqTransport))?)),
        }
    }
}

pub fn fetch_popularity(title: &str, provider: &mut Provider) -> Result<PopularityRecord, PopularityError> {
    if title.trim().is_empty() {
        return Err(PopularityError::MissingTitle(title.to_string()));
    }
    match provider {
        Provider::Static(table) => table.lookup(title),
        Provider::Http(http) => http.fetch(title),
    }
}

#[derive(Debug)]
pub struct PopularityFailure {
    pub title: String,
    pub error: PopularityError,
}

#[derive(Debug, Default)]
pub struct Annotation {
    pub records: Vec<PopularityRecord>,
    pub failures: Vec<PopularityFailure>,
}

/// Looks up every entry's title in index order; failures are collected, not fatal.
pub fn annotate_datasheet(index: &CorpusIndex, provider: &mut Provider) -> Annotation {
    let mut out = Annotation::default();
    for entry in &index.entries {
        match fetch_popularity(&entry.title, provider) {
            Ok(r) => out.records.push(r),
            Err(error) => out.failures.push(PopularityFailure { title: entry.title.clone(), error }),
        }
    }
    out
}

/// Writes `Title,Popularity` rows, readable back as a static provider.
pub fn write_static_csv(records: &[PopularityRecord], path: &Path) -> Result<(), PopularityError> {
    let io = |e: csv::Error| PopularityError::BadFile { path: path.to_path_buf(), message: e.to_string() };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(STATIC_HEADER).map_err(io)?;
    for r in records {
        w.write_record([r.title.as_str(), &r.count.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|source| PopularityError::Io { path: path.to_path_buf(), source })
}
