use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use super::IngestError;

pub const REQUIRED_COLUMNS: [&str; 3] = ["File Name", "Piece Title", "Composer"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub file_name: String,
    pub title: String,
    pub composer: String,
    /// Values of the non-required columns, aligned with [`CorpusIndex::extra_headers`].
    pub extra: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusIndex {
    pub root: PathBuf,
    pub extra_headers: Vec<String>,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusIndex {
    pub fn path_of(&self, entry: &CorpusEntry) -> PathBuf {
        self.root.join(&entry.file_name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extra_value<'a>(&self, entry: &'a CorpusEntry, header: &str) -> Option<&'a str> {
        let i = self.extra_headers.iter().position(|h| h == header)?;
        entry.extra.get(i).map(String::as_str)
    }
}

/// A datasheet row whose file could not be found under the corpus root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingFile {
    /// 1-based data row (the header is row 0).
    pub row: usize,
    pub file_name: String,
}

impl fmt::Display for MissingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} ({})", self.row, self.file_name)
    }
}

/// Result of scanning: the entries whose files exist, plus the rows that did not resolve.
#[derive(Debug, Clone)]
pub struct CorpusScan {
    pub index: CorpusIndex,
    pub missing: Vec<MissingFile>,
}

impl CorpusScan {
    /// Fails if any row referenced a missing file.
    pub fn into_strict(self) -> Result<CorpusIndex, IngestError> {
        if self.missing.is_empty() {
            Ok(self.index)
        } else {
            Err(IngestError::MissingFile(self.missing))
        }
    }
}

pub fn scan_corpus(root: &Path, datasheet: &Path) -> Result<CorpusScan, IngestError> {
    let file =
        std::fs::File::open(datasheet).map_err(|source| IngestError::Io { path: datasheet.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let missing_cols: Vec<String> =
        REQUIRED_COLUMNS.iter().filter(|c| !headers.iter().any(|h| h == *c)).map(|c| c.to_string()).collect();
    if !missing_cols.is_empty() {
        return Err(IngestError::BadHeader { missing: missing_cols });
    }
    let col = |name: &str| headers.iter().position(|h| h == name).expect("checked above");
    let (fi, ti, ci) = (col("File Name"), col("Piece Title"), col("Composer"));
    let extra_cols: Vec<usize> = (0..headers.len()).filter(|i| ![fi, ti, ci].contains(i)).collect();

    let mut index = CorpusIndex {
        root: root.to_path_buf(),
        extra_headers: extra_cols.iter().map(|&i| headers[i].clone()).collect(),
        entries: Vec::new(),
    };
    let mut missing = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let get = |j: usize| record.get(j).unwrap_or("").to_string();
        let file_name = get(fi);
        if !seen.insert(file_name.clone()) {
            return Err(IngestError::DuplicateFileName { row, file_name });
        }
        if !root.join(&file_name).is_file() {
            missing.push(MissingFile { row, file_name });
            continue;
        }
        index.entries.push(CorpusEntry {
            file_name,
            title: get(ti),
            composer: get(ci),
            extra: extra_cols.iter().map(|&j| get(j)).collect(),
        });
    }
    Ok(CorpusScan { index, missing })
}
