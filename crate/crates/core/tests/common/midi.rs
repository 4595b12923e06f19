//! Random polyphonic SMF layouts and a reference extraction through `midly`.

use melodic_core::ingest::smf_writer::{write_smf, TrackWriter};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
enum Ev {
    On { channel: u8, key: u8, vel: u8 },
    Off { channel: u8, key: u8, zero_velocity: bool },
    Program { channel: u8, program: u8 },
    Name,
    SysEx,
}

/// Encodes `pcs` so that onset extraction must return it in order.
///
/// Consecutive notes are grouped into chords at a shared tick; inside a chord
/// the (track, channel, key) triple strictly increases, while the bytes for one
/// tick are written in shuffled order. Note-offs are a mix of 0x8n events and
/// velocity-0 note-ons. Format 1 files spread notes over up to three tracks
/// after a conductor track.
pub fn encode_polyphonic<R: Rng>(pcs: &[u8], format: u16, rng: &mut R) -> Vec<u8> {
    assert!(format <= 1);
    let note_tracks = if format == 0 { 1 } else { rng.gen_range(1..=3) };
    let q: u64 = [96u64, 120, 480, 960][rng.gen_range(0..4)];
    let mut per_track: Vec<Vec<(u64, Ev)>> = vec![Vec::new(); note_tracks];
    let mut tick = 0u64;
    let mut i = 0;
    while i < pcs.len() {
        let size = if rng.gen_bool(0.6) { 1 } else { rng.gen_range(2..=4) }.min(pcs.len() - i);
        let mut track = 0usize;
        let mut channel = rng.gen_range(0..4u8);
        let mut prev_key: Option<u8> = None;
        for (k, &pc) in pcs[i..i + size].iter().enumerate() {
            if k > 0 && rng.gen_bool(0.3) {
                if track + 1 < note_tracks && rng.gen_bool(0.5) {
                    track += 1;
                    channel = rng.gen_range(0..4);
                } else if channel < 15 {
                    channel += 1;
                }
                prev_key = None;
            }
            let floor = match prev_key {
                Some(p) => p + 1,
                None => 12 * rng.gen_range(1..=3u8),
            };
            let mut key = 12 * (floor / 12) + pc;
            if key < floor {
                key += 12;
            }
            key += 12 * rng.gen_range(0..=1u8);
            prev_key = Some(key);
            let len = rng.gen_range(1..=2 * q);
            per_track[track].push((tick, Ev::On { channel, key, vel: rng.gen_range(1..=127) }));
            per_track[track].push((tick + len, Ev::Off { channel, key, zero_velocity: rng.gen_bool(0.5) }));
        }
        if rng.gen_bool(0.05) {
            let t = rng.gen_range(0..note_tracks);
            per_track[t].push((tick, Ev::Program { channel: rng.gen_range(0..16), program: rng.gen_range(0..128) }));
        }
        if rng.gen_bool(0.02) {
            per_track[0].push((tick, if rng.gen_bool(0.5) { Ev::Name } else { Ev::SysEx }));
        }
        i += size;
        tick += rng.gen_range(1..=q);
    }

    let mut bodies = Vec::new();
    if format == 1 {
        let mut conductor = TrackWriter::new();
        conductor.tempo(0, 500_000);
        bodies.push(conductor.finish());
    }
    for mut events in per_track {
        events.shuffle(rng);
        events.sort_by_key(|e| e.0);
        let mut w = TrackWriter::new().with_running_status(rng.gen_bool(0.5));
        if format == 0 {
            w.tempo(0, 500_000);
        }
        for (t, ev) in events {
            match ev {
                Ev::On { channel, key, vel } => w.note_on(t, channel, key, vel),
                Ev::Off { channel, key, zero_velocity: true } => w.note_on(t, channel, key, 0),
                Ev::Off { channel, key, zero_velocity: false } => w.note_off(t, channel, key),
                Ev::Program { channel, program } => w.program_change(t, channel, program),
                Ev::Name => w.track_name(t, "part"),
                Ev::SysEx => w.sysex(t, &[0x7E, 0x7F, 0x09, 0x01, 0xF7]),
            }
        }
        bodies.push(w.finish());
    }
    write_smf(format, q as u16, &bodies)
}

/// Pitch classes of every sounding onset, ordered by (tick, track, channel, key),
/// decoded with `midly`.
pub fn midly_pitch_classes(bytes: &[u8]) -> Vec<u8> {
    use midly::{MidiMessage, Smf, TrackEventKind};
    let smf = Smf::parse(bytes).expect("midly parses the file");
    let mut onsets = Vec::new();
    for (ti, track) in smf.tracks.iter().enumerate() {
        let mut tick = 0u64;
        for ev in track {
            tick += u64::from(ev.delta.as_int());
            if let TrackEventKind::Midi { channel, message: MidiMessage::NoteOn { key, vel } } = ev.kind {
                if vel.as_int() > 0 {
                    onsets.push((tick, ti, channel.as_int(), key.as_int()));
                }
            }
        }
    }
    onsets.sort();
    onsets.into_iter().map(|(_, _, _, k)| k % 12).collect()
}
