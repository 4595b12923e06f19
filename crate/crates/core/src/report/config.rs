use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::ingest::ExtractionConfig;
use crate::popularity::{HttpConfig, ProviderConfig};
use crate::stats::{TTestKind, DEFAULT_ALPHA};
use crate::transitions::MAX_NGRAM_ORDER;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("key {key}: {message}")]
    Value { key: String, message: String },
    #[error("missing required key {0}")]
    Missing(&'static str),
}

/// Everything a pipeline run needs. Relative paths in the file resolve against its directory.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus_root: PathBuf,
    pub datasheet: PathBuf,
    pub provider: ProviderConfig,
    pub out_dir: PathBuf,
    pub extraction: ExtractionConfig,
    pub leave_one_out: bool,
    pub t_test: TTestKind,
    pub alpha: f64,
    pub top_k: usize,
    /// Extra n-gram originality column when set.
    pub ngram_order: Option<usize>,
    pub swap_axes: bool,
}

const KEYS: [&str; 19] = [
    "corpus_root",
    "datasheet",
    "provider",
    "popularity_file",
    "endpoint_template",
    "count_pattern",
    "min_interval_secs",
    "cache_path",
    "cache_ttl_secs",
    "user_agent",
    "quote_titles",
    "exclude_percussion",
    "leave_one_out",
    "t_test",
    "alpha",
    "top_k",
    "ngram_order",
    "out_dir",
    "swap_axes",
];

/// `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            message: format!("expected key = value, got {line:?}"),
        })?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(ConfigError::Syntax { line: i + 1, message: format!("unknown key {k:?}") });
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(ConfigError::Syntax { line: i + 1, message: format!("duplicate key {k:?}") });
        }
    }
    Ok(out)
}

struct Values {
    map: BTreeMap<String, String>,
    base: PathBuf,
}

impl Values {
    fn str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.str(key).map(|v| self.base.join(v))
    }

    fn required_path(&self, key: &'static str) -> Result<PathBuf, ConfigError> {
        self.path(key).ok_or(ConfigError::Missing(key))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.str(key)
            .map(|v| v.parse::<T>().map_err(|e| ConfigError::Value { key: key.into(), message: format!("{v:?}: {e}") }))
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        Ok(self.parse::<bool>(key)?.unwrap_or(false))
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let v = Values { map: parse_key_values(text)?, base: base_dir.to_path_buf() };
        let provider = match v.str("provider").unwrap_or("static") {
            "static" | "static_csv" => ProviderConfig::StaticCsv { path: v.required_path("popularity_file")? },
            "http" => {
                let mut http = HttpConfig::new(
                    v.str("endpoint_template").ok_or(ConfigError::Missing("endpoint_template"))?,
                    v.str("count_pattern").ok_or(ConfigError::Missing("count_pattern"))?,
                );
                if let Some(secs) = v.parse::<f64>("min_interval_secs")? {
                    http.min_interval = Duration::try_from_secs_f64(secs)
                        .map_err(|e| ConfigError::Value { key: "min_interval_secs".into(), message: e.to_string() })?;
                }
                http.cache_path = v.path("cache_path");
                http.cache_ttl = v.parse::<u64>("cache_ttl_secs")?.map(Duration::from_secs);
                if let Some(ua) = v.str("user_agent") {
                    http.user_agent = ua.to_string();
                }
                http.quote_titles = v.flag("quote_titles")?;
                http.validate().map_err(|e| ConfigError::Value { key: "provider".into(), message: e.to_string() })?;
                ProviderConfig::Http(http)
            }
            other => {
                return Err(ConfigError::Value {
                    key: "provider".into(),
                    message: format!("{other:?} is not static or http"),
                })
            }
        };
        let t_test = match v.str("t_test").unwrap_or("welch") {
            "welch" => TTestKind::Welch,
            "pooled" => TTestKind::Pooled,
            other => {
                return Err(ConfigError::Value {
                    key: "t_test".into(),
                    message: format!("{other:?} is not welch or pooled"),
                })
            }
        };
        let alpha = v.parse::<f64>("alpha")?.unwrap_or(DEFAULT_ALPHA);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ConfigError::Value { key: "alpha".into(), message: format!("{alpha} outside (0, 1)") });
        }
        let ngram_order = match v.parse::<usize>("ngram_order")? {
            None | Some(0) => None,
            Some(n) if (3..=MAX_NGRAM_ORDER).contains(&n) => Some(n),
            Some(n) => {
                return Err(ConfigError::Value {
                    key: "ngram_order".into(),
                    message: format!("{n} outside 3..={MAX_NGRAM_ORDER}"),
                })
            }
        };
        Ok(PipelineConfig {
            corpus_root: v.required_path("corpus_root")?,
            datasheet: v.required_path("datasheet")?,
            provider,
            out_dir: v.path("out_dir").unwrap_or_else(|| base_dir.join("out")),
            extraction: ExtractionConfig { exclude_percussion: v.flag("exclude_percussion")? },
            leave_one_out: v.flag("leave_one_out")?,
            t_test,
            alpha,
            top_k: v.parse::<usize>("top_k")?.unwrap_or(5),
            ngram_order,
            swap_axes: v.flag("swap_axes")?,
        })
    }
}
