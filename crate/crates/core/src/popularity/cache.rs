use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};

use super::{PopularityError, PopularityRecord};

pub const CACHE_HEADER: [&str; 4] = ["title", "count", "fetched_at", "provider"];

pub fn write_cache(records: &[PopularityRecord], path: &Path) -> Result<(), PopularityError> {
    let err = |e: csv::Error| PopularityError::BadFile { path: path.to_path_buf(), message: e.to_string() };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(CACHE_HEADER).map_err(err)?;
    for r in records {
        w.write_record([
            r.title.as_str(),
            &r.count.to_string(),
            &r.fetched_at.to_rfc3339_opts(SecondsFormat::Micros, true),
            r.provider.as_str(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|source| PopularityError::Io { path: path.to_path_buf(), source })
}

pub fn read_cache(path: &Path) -> Result<Vec<PopularityRecord>, PopularityError> {
    let bad = |message: String| PopularityError::BadFile { path: path.to_path_buf(), message };
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = r.headers().map_err(|e| bad(e.to_string()))?;
    if headers.iter().ne(CACHE_HEADER) {
        return Err(bad(format!("expected header {}", CACHE_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let count = rec[1].parse().map_err(|_| bad(format!("row {}: bad count {:?}", i + 1, &rec[1])))?;
        let fetched_at =
            DateTime::parse_from_rfc3339(&rec[2]).map_err(|e| bad(format!("row {}: {e}", i + 1)))?.with_timezone(&Utc);
        out.push(PopularityRecord { title: rec[0].to_string(), count, fetched_at, provider: rec[3].to_string() });
    }
    Ok(out)
}
