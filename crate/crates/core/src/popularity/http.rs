use std::collections::HashMap;
use std::time::{Duration, Instant};

use chrono::Utc;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use regex::Regex;

use super::cache::{read_cache, write_cache};
use super::{parse_count, HttpConfig, PopularityError, PopularityRecord, HTTP_PROVIDER_TAG};

/// Everything except RFC 3986 unreserved characters is escaped.
const QUERY_COMPONENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

/// Substitutes the percent-encoded title into the `{query}` placeholder.
pub fn build_query_url(template: &str, title: &str, quote: bool) -> String {
    let query = if quote { format!("\"{title}\"") } else { title.to_string() };
    let encoded = utf8_percent_encode(&query, QUERY_COMPONENT).to_string();
    template.replacen("{query}", &encoded, 1)
}

/// First match of `pattern` in `body`, separators stripped. Uses capture group 1 when present.
pub fn extract_count(body: &str, pattern: &Regex) -> Option<u64> {
    let caps = pattern.captures(body)?;
    let m = caps.get(1).or_else(|| caps.get(0))?;
    parse_count(m.as_str())
}

/// Blocking GET returning the response body.
pub trait Transport {
    fn get(&mut self, url: &str, user_agent: &str) -> Result<String, String>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UreqTransport;

impl Transport for UreqTransport {
    fn get(&mut self, url: &str, user_agent: &str) -> Result<String, String> {
        ureq::get(url)
            .set("User-Agent", user_agent)
            .call()
            .map_err(|e| e.to_string())?
            .into_string()
            .map_err(|e| e.to_string())
    }
}

/// Spaces successive request starts at least `min_interval` apart.
#[derive(Debug, Clone)]
pub struct RateLimiter {
    min_interval: Duration,
    last_start: Option<Instant>,
}

impl RateLimiter {
    pub fn new(min_interval: Duration) -> Self {
        RateLimiter { min_interval, last_start: None }
    }

    /// Blocks until the next request may start and returns its start time.
    pub fn acquire(&mut self) -> Instant {
        if let Some(last) = self.last_start {
            let ready = last + self.min_interval;
            let now = Instant::now();
            if ready > now {
                std::thread::sleep(ready - now);
            }
        }
        let start = Instant::now();
        self.last_start = Some(start);
        start
    }
}

pub struct HttpProvider {
    config: HttpConfig,
    pattern: Regex,
    transport: Box<dyn Transport>,
    limiter: RateLimiter,
    cache: HashMap<String, PopularityRecord>,
}

impl HttpProvider {
    pub fn new(config: HttpConfig, transport: Box<dyn Transport>) -> Result<Self, PopularityError> {
        config.validate()?;
        let pattern = Regex::new(&config.count_pattern).expect("validated");
        let cache = match &config.cache_path {
            Some(path) if path.exists() => read_cache(path)?.into_iter().map(|r| (r.title.clone(), r)).collect(),
            _ => HashMap::new(),
        };
        let limiter = RateLimiter::new(config.min_interval);
        Ok(HttpProvider { config, pattern, transport, limiter, cache })
    }

    fn cached(&self, title: &str) -> Option<&PopularityRecord> {
        let rec = self.cache.get(title)?;
        match self.config.cache_ttl {
            None => Some(rec),
            Some(ttl) => {
                let age = Utc::now().signed_duration_since(rec.fetched_at);
                (age.to_std().map(|a| a <= ttl).unwrap_or(true)).then_some(rec)
            }
        }
    }

    pub fn fetch(&mut self, title: &str) -> Result<PopularityRecord, PopularityError> {
        if let Some(rec) = self.cached(title) {
            return Ok(rec.clone());
        }
        let url = build_query_url(&self.config.endpoint_template, title, self.config.quote_titles);
        self.limiter.acquire();
        let body = self
            .transport
            .get(&url, &self.config.user_agent)
            .map_err(|message| PopularityError::NetworkError { title: title.to_string(), message })?;
        let count =
            extract_count(&body, &self.pattern).ok_or_else(|| PopularityError::PatternMiss(title.to_string()))?;
        let record = PopularityRecord {
            title: title.to_string(),
            count,
            fetched_at: Utc::now(),
            provider: HTTP_PROVIDER_TAG.to_string(),
        };
        self.cache.insert(title.to_string(), record.clone());
        if let Some(path) = &self.config.cache_path {
            let mut all: Vec<PopularityRecord> = self.cache.values().cloned().collect();
            all.sort_by(|a, b| a.title.cmp(&b.title));
            write_cache(&all, path)?;
        }
        Ok(record)
    }
}
