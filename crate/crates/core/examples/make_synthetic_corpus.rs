//! Regenerates the bundled 12-piece corpus under `fixtures/corpus`.
//!
//! Six invented composers, two pieces each. Each composer draws melodic steps
//! from its own interval weights, so groups differ in originality.
//!
//!     cargo run --example make_synthetic_corpus [-- <out dir>]

use std::fs;
use std::path::PathBuf;

use melodic_core::ingest::smf_writer::{encode_sequence, write_smf, SequenceEncoding, TrackWriter};
use melodic_core::PitchClass;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Composer {
    name: &'static str,
    /// Weight of each upward step 0..=11 semitones (mod 12).
    steps: [u32; 12],
    pieces: [(&'static str, &'static str, u64); 2],
}

const COMPOSERS: [Composer; 6] = [
    Composer {
        name: "Arndt",
        steps: [4, 2, 30, 1, 1, 6, 0, 6, 1, 1, 30, 2],
        pieces: [("arndt_etude_1.mid", "Etude in C, Op.2 No.1", 48_200), ("arndt_lied.mid", "Lied ohne Titel", 12_900)],
    },
    Composer {
        name: "Brenner",
        steps: [20, 1, 10, 8, 8, 3, 0, 3, 8, 8, 10, 1],
        pieces: [
            ("brenner_waltz.mid", "Valse brillante, Op.11", 230_500),
            ("brenner_nocturne.mid", "Nocturne in F minor, Op.9 No.2", 151_000),
        ],
    },
    Composer {
        name: "Castell",
        steps: [1, 8, 3, 6, 3, 6, 9, 6, 3, 6, 3, 8],
        pieces: [
            ("castell_fantasy.mid", "Fantasy, Op.17", 98_700),
            ("castell_mazurka.mid", "Mazurka, Op.5, No.2", 402_000),
        ],
    },
    Composer {
        name: "Dorn",
        steps: [6, 3, 18, 4, 6, 10, 1, 10, 6, 4, 18, 3],
        pieces: [("dorn_sonata.mid", "Sonata in A, Op.21", 7_450), ("dorn_impromptu.mid", "Impromptu No.3", 64_300)],
    },
    Composer {
        name: "Ehrling",
        steps: [2, 10, 4, 10, 2, 4, 12, 4, 2, 10, 4, 10],
        pieces: [
            ("ehrling_ballade.mid", "Ballade, Op.1", 310_200),
            ("ehrling_caprice.mid", "Caprice \"Am Meer\"", 27_800),
        ],
    },
    Composer {
        name: "Falk",
        steps: [10, 2, 14, 2, 12, 8, 1, 8, 12, 2, 14, 2],
        pieces: [("falk_romance.mid", "Romance in G", 89_900), ("falk_scherzo.mid", "Scherzo, Op.4 No.1", 175_600)],
    },
];

fn melody(rng: &mut ChaCha8Rng, steps: &[u32; 12], len: usize) -> Vec<PitchClass> {
    let dist = WeightedIndex::new(steps).expect("positive weights");
    let mut pc = rng.gen_range(0..12u8);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(PitchClass::from_midi(pc));
        pc = (pc + dist.sample(rng) as u8) % 12;
    }
    out
}

/// Melody in one track and a sparse chordal accompaniment in another.
fn with_accompaniment(notes: &[PitchClass]) -> Vec<u8> {
    let q = 240u64;
    let mut conductor = TrackWriter::new();
    conductor.tempo(0, 600_000);
    conductor.track_name(0, "conductor");
    let mut tune = TrackWriter::new().with_running_status(true);
    for (i, pc) in notes.iter().enumerate() {
        let key = 72 + pc.value();
        tune.note_on(i as u64 * q, 0, key, 90);
        // Half of the note-offs are velocity-0 note-ons.
        if i % 2 == 0 {
            tune.note_on((i as u64 + 1) * q, 0, key, 0);
        } else {
            tune.note_off((i as u64 + 1) * q, 0, key);
        }
    }
    let mut bass = TrackWriter::new();
    bass.program_change(0, 1, 32);
    for bar in 0..notes.len() / 8 {
        let t = (bar * 8) as u64 * q;
        for key in [36, 43, 48] {
            bass.note_on(t, 1, key, 60);
        }
        for key in [36, 43, 48] {
            bass.note_off(t + 4 * q, 1, key);
        }
    }
    write_smf(1, q as u16, &[conductor.finish(), tune.finish(), bass.finish()])
}

fn main() -> std::io::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus"));
    let midi_dir = out.join("midi");
    fs::create_dir_all(&midi_dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);

    let mut sheet = csv::Writer::from_path(out.join("datasheet.csv"))?;
    sheet.write_record(["File Name", "Piece Title", "Composer", "Melodic Originality", "Popularity"])?;
    let mut pop = csv::Writer::from_path(out.join("popularity.csv"))?;
    pop.write_record(["Title", "Popularity"])?;

    for composer in &COMPOSERS {
        for (k, (file, title, count)) in composer.pieces.iter().enumerate() {
            let len = rng.gen_range(80..220);
            let notes = melody(&mut rng, &composer.steps, len);
            let bytes = match k {
                0 => encode_sequence(&notes, SequenceEncoding { format: 0, ticks_per_quarter: 480, octave: 4 }),
                _ if composer.name.len() % 2 == 0 => with_accompaniment(&notes),
                _ => encode_sequence(&notes, SequenceEncoding { format: 1, ticks_per_quarter: 96, octave: 5 }),
            };
            fs::write(midi_dir.join(file), bytes)?;
            sheet.write_record([*file, *title, composer.name, "", ""])?;
            pop.write_record([title.to_string(), count.to_string()])?;
        }
    }
    sheet.flush()?;
    pop.flush()?;
    fs::write(
        out.join("melodic.conf"),
        "# Bundled synthetic corpus\n\
         corpus_root = midi\n\
         datasheet = datasheet.csv\n\
         provider = static\n\
         popularity_file = popularity.csv\n\
         t_test = welch\n\
         top_k = 5\n\
         ngram_order = 3\n\
         out_dir = out\n",
    )?;
    println!("wrote {}", out.display());
    Ok(())
}
