use std::collections::HashSet;
use std::path::Path;

use super::ReportError;

pub const DATASHEET_HEADER: [&str; 5] = ["File Name", "Piece Title", "Composer", "Melodic Originality", "Popularity"];

/// One datasheet row.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceRecord {
    pub file_name: String,
    pub title: String,
    pub composer: String,
    pub originality: Option<f64>,
    pub popularity: Option<u64>,
}

impl PieceRecord {
    pub fn new(file_name: impl Into<String>, title: impl Into<String>, composer: impl Into<String>) -> Self {
        PieceRecord {
            file_name: file_name.into(),
            title: title.into(),
            composer: composer.into(),
            originality: None,
            popularity: None,
        }
    }
}

fn validate(records: &[PieceRecord]) -> Result<(), ReportError> {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.file_name.as_str()) {
            return Err(ReportError::InvalidRecord(format!("duplicate file name {:?}", r.file_name)));
        }
        if let Some(o) = r.originality {
            if !(0.0..=1.0).contains(&o) {
                return Err(ReportError::InvalidRecord(format!("{}: originality {o} outside [0,1]", r.file_name)));
            }
        }
    }
    Ok(())
}

/// Writes the five-column datasheet; originality to four decimals, blanks for missing values.
pub fn write_datasheet(records: &[PieceRecord], path: &Path) -> Result<(), ReportError> {
    validate(records)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| ReportError::csv(path, e))?;
    w.write_record(DATASHEET_HEADER).map_err(|e| ReportError::csv(path, e))?;
    for r in records {
        let originality = r.originality.map(|o| format!("{o:.4}")).unwrap_or_default();
        let popularity = r.popularity.map(|p| p.to_string()).unwrap_or_default();
        w.write_record([r.file_name.as_str(), &r.title, &r.composer, &originality, &popularity])
            .map_err(|e| ReportError::csv(path, e))?;
    }
    w.flush().map_err(|e| ReportError::io(path, e))
}

pub fn read_datasheet(path: &Path) -> Result<Vec<PieceRecord>, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| ReportError::csv(path, e))?;
    let headers = r.headers().map_err(|e| ReportError::csv(path, e))?;
    if headers.iter().map(str::trim).ne(DATASHEET_HEADER) {
        return Err(ReportError::InvalidRecord(format!(
            "{}: expected header {}",
            path.display(),
            DATASHEET_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| ReportError::csv(path, e))?;
        let bad = |what: &str, v: &str| ReportError::InvalidRecord(format!("row {}: bad {what} {v:?}", i + 1));
        let originality = match rec[3].trim() {
            "" => None,
            v => Some(v.parse::<f64>().map_err(|_| bad("originality", v))?),
        };
        let popularity = match rec[4].trim() {
            "" => None,
            v => Some(v.parse::<u64>().map_err(|_| bad("popularity", v))?),
        };
        out.push(PieceRecord {
            file_name: rec[0].to_string(),
            title: rec[1].to_string(),
            composer: rec[2].to_string(),
            originality,
            popularity,
        });
    }
    validate(&out)?;
    Ok(out)
}
