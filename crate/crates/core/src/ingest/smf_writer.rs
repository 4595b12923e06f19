//! Minimal SMF encoder for synthetic corpora and fixtures.

use super::pitch::PitchClass;

/// Accumulates one track body. Events must be pushed in non-decreasing tick order.
#[derive(Debug, Clone, Default)]
pub struct TrackWriter {
    bytes: Vec<u8>,
    last_tick: u64,
    running: Option<u8>,
    running_status: bool,
}

fn push_var_len(out: &mut Vec<u8>, mut value: u32) {
    assert!(value < 0x1000_0000, "delta time exceeds 28 bits");
    let mut buf = [0u8; 4];
    let mut i = 3;
    buf[i] = (value & 0x7f) as u8;
    value >>= 7;
    while value > 0 {
        i -= 1;
        buf[i] = ((value & 0x7f) as u8) | 0x80;
        value >>= 7;
    }
    out.extend_from_slice(&buf[i..]);
}

impl TrackWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Omit repeated channel status bytes.
    pub fn with_running_status(mut self, enabled: bool) -> Self {
        self.running_status = enabled;
        self
    }

    fn delta(&mut self, tick: u64) {
        assert!(tick >= self.last_tick, "events must be pushed in tick order");
        let delta = u32::try_from(tick - self.last_tick).expect("delta fits in u32");
        push_var_len(&mut self.bytes, delta);
        self.last_tick = tick;
    }

    fn channel_event(&mut self, tick: u64, status: u8, data: &[u8]) {
        self.delta(tick);
        if !(self.running_status && self.running == Some(status)) {
            self.bytes.push(status);
        }
        self.running = Some(status);
        self.bytes.extend_from_slice(data);
    }

    pub fn note_on(&mut self, tick: u64, channel: u8, key: u8, velocity: u8) {
        self.channel_event(tick, 0x90 | (channel & 0x0f), &[key & 0x7f, velocity & 0x7f]);
    }

    pub fn note_off(&mut self, tick: u64, channel: u8, key: u8) {
        self.channel_event(tick, 0x80 | (channel & 0x0f), &[key & 0x7f, 0x40]);
    }

    pub fn program_change(&mut self, tick: u64, channel: u8, program: u8) {
        self.channel_event(tick, 0xC0 | (channel & 0x0f), &[program & 0x7f]);
    }

    pub fn meta(&mut self, tick: u64, kind: u8, data: &[u8]) {
        self.delta(tick);
        self.bytes.extend_from_slice(&[0xFF, kind]);
        push_var_len(&mut self.bytes, data.len() as u32);
        self.bytes.extend_from_slice(data);
        self.running = None;
    }

    pub fn tempo(&mut self, tick: u64, micros_per_quarter: u32) {
        let b = micros_per_quarter.to_be_bytes();
        self.meta(tick, 0x51, &b[1..]);
    }

    pub fn track_name(&mut self, tick: u64, name: &str) {
        self.meta(tick, 0x03, name.as_bytes());
    }

    pub fn sysex(&mut self, tick: u64, data: &[u8]) {
        self.delta(tick);
        self.bytes.push(0xF0);
        push_var_len(&mut self.bytes, data.len() as u32);
        self.bytes.extend_from_slice(data);
        self.running = None;
    }

    /// Appends end-of-track and returns the chunk body.
    pub fn finish(mut self) -> Vec<u8> {
        let tick = self.last_tick;
        self.meta(tick, 0x2F, &[]);
        self.bytes
    }
}

/// Assembles header and track chunks into a file image.
pub fn write_smf(format: u16, division: u16, tracks: &[Vec<u8>]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&format.to_be_bytes());
    out.extend_from_slice(&(tracks.len() as u16).to_be_bytes());
    out.extend_from_slice(&division.to_be_bytes());
    for body in tracks {
        out.extend_from_slice(b"MTrk");
        out.extend_from_slice(&(body.len() as u32).to_be_bytes());
        out.extend_from_slice(body);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceEncoding {
    /// 0 writes a single track; 1 writes a tempo track followed by a note track.
    pub format: u16,
    pub ticks_per_quarter: u16,
    /// Octave in scientific pitch notation, 4 places C at MIDI 60.
    pub octave: u8,
}

impl Default for SequenceEncoding {
    fn default() -> Self {
        SequenceEncoding { format: 0, ticks_per_quarter: 480, octave: 4 }
    }
}

/// Encodes pitch classes as a monophonic line of quarter notes.
///
/// Panics if a note would land above MIDI key 127 (octave 9 holds C to G only).
pub fn encode_sequence(notes: &[PitchClass], enc: SequenceEncoding) -> Vec<u8> {
    assert!(enc.format <= 1, "only formats 0 and 1 are written");
    let base = 12 * (u16::from(enc.octave) + 1);
    let q = u64::from(enc.ticks_per_quarter);
    let mut notes_track = TrackWriter::new();
    if enc.format == 0 {
        notes_track.tempo(0, 500_000);
    }
    for (i, pc) in notes.iter().enumerate() {
        let key = u8::try_from(base + u16::from(pc.value()))
            .ok()
            .filter(|k| *k <= 127)
            .unwrap_or_else(|| panic!("{} in octave {} is above MIDI key 127", pc.name(), enc.octave));
        let start = i as u64 * q;
        notes_track.note_on(start, 0, key, 80);
        notes_track.note_off(start + q, 0, key);
    }
    let notes_body = notes_track.finish();
    if enc.format == 0 {
        write_smf(0, enc.ticks_per_quarter, &[notes_body])
    } else {
        let mut conductor = TrackWriter::new();
        conductor.tempo(0, 500_000);
        write_smf(1, enc.ticks_per_quarter, &[conductor.finish(), notes_body])
    }
}
