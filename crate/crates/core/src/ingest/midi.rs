//! Standard MIDI File reader.
//!
//! Handles formats 0 and 1: big-endian chunk lengths, variable-length delta
//! times and running status. Meta and system-exclusive events are consumed
//! and dropped; only channel voice messages are kept, with deltas converted
//! to absolute ticks.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidiError {
    #[error("missing MThd header chunk (found {found:?})")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported SMF format {0}")]
    UnsupportedFormat(u16),
    #[error("truncated {context} at byte offset {offset}")]
    TruncatedChunk { context: &'static str, offset: usize },
    #[error("variable-length quantity longer than 4 bytes at byte offset {offset}")]
    InvalidVarLen { offset: usize },
    #[error("data byte {byte:#04x} without running status at byte offset {offset}")]
    MissingStatus { byte: u8, offset: usize },
    #[error("unsupported status byte {status:#04x} at byte offset {offset}")]
    UnsupportedStatus { status: u8, offset: usize },
}

/// Header fields from the `MThd` chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MidiHeader {
    pub format: u16,
    pub declared_tracks: u16,
    /// Raw division word: ticks per quarter note, or SMPTE timing if the top bit is set.
    pub division: u16,
}

/// Channel voice messages. Running status has already been resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMessage {
    NoteOff { key: u8, velocity: u8 },
    NoteOn { key: u8, velocity: u8 },
    PolyPressure { key: u8, pressure: u8 },
    Controller { controller: u8, value: u8 },
    ProgramChange { program: u8 },
    ChannelPressure { pressure: u8 },
    PitchBend { value: u16 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackEvent {
    /// Absolute time in ticks from the start of the track.
    pub tick: u64,
    pub channel: u8,
    pub message: ChannelMessage,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Track {
    pub events: Vec<TrackEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidiDocument {
    pub header: MidiHeader,
    pub tracks: Vec<Track>,
}

/// A sounding note onset: note-on with non-zero velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimedNoteEvent {
    pub tick: u64,
    pub track_index: usize,
    pub channel: u8,
    pub note_number: u8,
    pub velocity: u8,
}

impl MidiDocument {
    /// All note-on events with velocity > 0, in file order per track.
    pub fn note_events(&self) -> Vec<TimedNoteEvent> {
        let mut out = Vec::new();
        for (track_index, track) in self.tracks.iter().enumerate() {
            for ev in &track.events {
                if let ChannelMessage::NoteOn { key, velocity } = ev.message {
                    if velocity > 0 {
                        out.push(TimedNoteEvent {
                            tick: ev.tick,
                            track_index,
                            channel: ev.channel,
                            note_number: key,
                            velocity,
                        });
                    }
                }
            }
        }
        out
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    /// Offset of `bytes[0]` within the whole file, for error reporting.
    base: usize,
    context: &'static str,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8], base: usize, context: &'static str) -> Self {
        Cursor { bytes, pos: 0, base, context }
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn truncated(&self) -> MidiError {
        MidiError::TruncatedChunk { context: self.context, offset: self.offset() }
    }

    fn u8(&mut self) -> Result<u8, MidiError> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| self.truncated())?;
        self.pos += 1;
        Ok(b)
    }

    fn peek(&self) -> Result<u8, MidiError> {
        self.bytes.get(self.pos).copied().ok_or_else(|| self.truncated())
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], MidiError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(self.truncated()),
        }
    }

    fn u16_be(&mut self) -> Result<u16, MidiError> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32_be(&mut self) -> Result<u32, MidiError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn var_len(&mut self) -> Result<u32, MidiError> {
        let start = self.offset();
        let mut value: u32 = 0;
        for _ in 0..4 {
            let b = self.u8()?;
            value = (value << 7) | u32::from(b & 0x7f);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(MidiError::InvalidVarLen { offset: start })
    }
}

/// Parses a complete SMF image.
pub fn parse_midi(bytes: &[u8]) -> Result<MidiDocument, MidiError> {
    let mut file = Cursor::new(bytes, 0, "header chunk");
    let magic = file.take(4)?;
    if magic != b"MThd" {
        let mut found = [0u8; 4];
        found.copy_from_slice(magic);
        return Err(MidiError::BadMagic { found });
    }
    let header_len = file.u32_be()? as usize;
    let header_body = file.take(header_len)?;
    if header_len < 6 {
        return Err(MidiError::TruncatedChunk { context: "header chunk", offset: 8 + header_len });
    }
    let mut hc = Cursor::new(header_body, 8, "header chunk");
    let header = MidiHeader { format: hc.u16_be()?, declared_tracks: hc.u16_be()?, division: hc.u16_be()? };
    if header.format > 1 {
        return Err(MidiError::UnsupportedFormat(header.format));
    }

    let mut tracks = Vec::with_capacity(header.declared_tracks as usize);
    while tracks.len() < header.declared_tracks as usize {
        file.context = "track chunk";
        let id = file.take(4)?;
        let len = file.u32_be()? as usize;
        let body_start = file.offset();
        let body = file.take(len)?;
        if id == b"MTrk" {
            tracks.push(parse_track(body, body_start)?);
        }
        // Unknown chunk types are skipped.
    }
    Ok(MidiDocument { header, tracks })
}

fn data_byte(c: &mut Cursor<'_>) -> Result<u8, MidiError> {
    let offset = c.offset();
    let b = c.u8()?;
    if b & 0x80 != 0 {
        return Err(MidiError::UnsupportedStatus { status: b, offset });
    }
    Ok(b)
}

fn parse_track(body: &[u8], base: usize) -> Result<Track, MidiError> {
    let mut c = Cursor::new(body, base, "track event");
    let mut tick: u64 = 0;
    let mut running: Option<u8> = None;
    let mut events = Vec::new();

    while !c.at_end() {
        tick += u64::from(c.var_len()?);
        let offset = c.offset();
        let lead = c.peek()?;
        let status = if lead & 0x80 != 0 {
            c.u8()?;
            lead
        } else {
            running.ok_or(MidiError::MissingStatus { byte: lead, offset })?
        };

        match status {
            0xFF => {
                running = None;
                let kind = c.u8()?;
                let len = c.var_len()? as usize;
                c.take(len)?;
                if kind == 0x2F {
                    break;
                }
            }
            0xF0 | 0xF7 => {
                running = None;
                let len = c.var_len()? as usize;
                c.take(len)?;
            }
            0x80..=0xEF => {
                running = Some(status);
                let channel = status & 0x0F;
                let message = match status & 0xF0 {
                    0x80 => ChannelMessage::NoteOff { key: data_byte(&mut c)?, velocity: data_byte(&mut c)? },
                    0x90 => ChannelMessage::NoteOn { key: data_byte(&mut c)?, velocity: data_byte(&mut c)? },
                    0xA0 => ChannelMessage::PolyPressure { key: data_byte(&mut c)?, pressure: data_byte(&mut c)? },
                    0xB0 => ChannelMessage::Controller { controller: data_byte(&mut c)?, value: data_byte(&mut c)? },
                    0xC0 => ChannelMessage::ProgramChange { program: data_byte(&mut c)? },
                    0xD0 => ChannelMessage::ChannelPressure { pressure: data_byte(&mut c)? },
                    _ => {
                        let lsb = data_byte(&mut c)?;
                        let msb = data_byte(&mut c)?;
                        ChannelMessage::PitchBend { value: (u16::from(msb) << 7) | u16::from(lsb) }
                    }
                };
                events.push(TrackEvent { tick, channel, message });
            }
            other => return Err(MidiError::UnsupportedStatus { status: other, offset }),
        }
    }
    Ok(Track { events })
}
