//! MIDI and datasheet ingestion: files in, ordered pitch-class sequences out.

mod corpus;
pub mod midi;
mod pitch;
pub mod smf_writer;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use corpus::{scan_corpus, CorpusEntry, CorpusIndex, CorpusScan, MissingFile, REQUIRED_COLUMNS};
pub use midi::{parse_midi, MidiDocument, MidiError, TimedNoteEvent};
pub use pitch::{ParsePitchClassError, PitchClass, PITCH_CLASS_NAMES};

/// MIDI channel 10 in 1-based numbering.
pub const PERCUSSION_CHANNEL: u8 = 9;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{piece}: no sounding notes")]
    EmptyPiece { piece: PieceId },
    #[error("{piece}: {source}")]
    Midi {
        piece: PieceId,
        #[source]
        source: MidiError,
    },
    #[error("datasheet header is missing column(s): {}", missing.join(", "))]
    BadHeader { missing: Vec<String> },
    #[error("{} datasheet row(s) reference missing files: {}", .0.len(), fmt_missing(.0))]
    MissingFile(Vec<MissingFile>),
    #[error("datasheet row {row}: duplicate file name {file_name:?}")]
    DuplicateFileName { row: usize, file_name: String },
    #[error("datasheet: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn fmt_missing(missing: &[MissingFile]) -> String {
    missing.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("; ")
}

/// Opaque piece identifier; the datasheet file name in practice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PieceId(pub String);

impl PieceId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PieceId {
    fn from(s: &str) -> Self {
        PieceId(s.to_string())
    }
}

impl From<String> for PieceId {
    fn from(s: String) -> Self {
        PieceId(s)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractionConfig {
    /// Drop events on the General MIDI percussion channel.
    pub exclude_percussion: bool,
}

/// The ordered note stream of one piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitchClassSequence {
    pub piece_id: PieceId,
    notes: Vec<PitchClass>,
}

impl PitchClassSequence {
    pub fn new(piece_id: impl Into<PieceId>, notes: Vec<PitchClass>) -> Self {
        PitchClassSequence { piece_id: piece_id.into(), notes }
    }

    /// Builds a sequence from raw values; panics on values outside `0..=11`.
    pub fn from_values(piece_id: impl Into<PieceId>, values: &[u8]) -> Self {
        let notes = values
            .iter()
            .map(|&v| PitchClass::new(v).unwrap_or_else(|| panic!("pitch class {v} out of range")))
            .collect();
        Self::new(piece_id, notes)
    }

    pub fn notes(&self) -> &[PitchClass] {
        &self.notes
    }

    pub fn note_count(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    /// Adjacent (from, to) pairs in order.
    pub fn bigrams(&self) -> impl Iterator<Item = (PitchClass, PitchClass)> + '_ {
        self.notes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Merges every track into one onset-ordered stream of pitch classes.
///
/// Ties at the same tick are broken by track index, channel, then ascending
/// note number. Note-ons with velocity 0 are note-offs and contribute nothing.
pub fn extract_sequence(
    doc: &MidiDocument,
    config: &ExtractionConfig,
    piece_id: impl Into<PieceId>,
) -> Result<PitchClassSequence, IngestError> {
    let piece_id = piece_id.into();
    let mut events: Vec<TimedNoteEvent> = doc
        .note_events()
        .into_iter()
        .filter(|e| !(config.exclude_percussion && e.channel == PERCUSSION_CHANNEL))
        .collect();
    if events.is_empty() {
        return Err(IngestError::EmptyPiece { piece: piece_id });
    }
    events.sort_by_key(|e| (e.tick, e.track_index, e.channel, e.note_number));
    let notes = events.iter().map(|e| PitchClass::from_midi(e.note_number)).collect();
    Ok(PitchClassSequence { piece_id, notes })
}

/// Reads, parses and extracts one MIDI file.
pub fn read_piece(
    path: &Path,
    config: &ExtractionConfig,
    piece_id: impl Into<PieceId>,
) -> Result<PitchClassSequence, IngestError> {
    let piece_id = piece_id.into();
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    let doc = parse_midi(&bytes).map_err(|source| IngestError::Midi { piece: piece_id.clone(), source })?;
    extract_sequence(&doc, config, piece_id)
}
