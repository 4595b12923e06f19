//! Shared helpers for the integration tests and the acceptance runner.
#![allow(dead_code)]

pub mod midi;
pub mod oracles;
pub mod props;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")
}

/// `|a - b| <= tol * max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Reads a 12x12 labelled CSV (header row and label column) into numbers.
pub fn read_labelled_matrix(name: &str) -> [[f64; 12]; 12] {
    let mut rdr = csv::Reader::from_path(fixture(name)).expect("fixture exists");
    let mut out = [[0.0; 12]; 12];
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.expect("csv row");
        for j in 0..12 {
            out[i][j] = rec[j + 1].trim().parse().expect("number");
        }
        rows += 1;
    }
    assert_eq!(rows, 12, "{name} has 12 rows");
    out
}

/// Six groups with unequal sizes and shifted means.
pub fn six_groups(seed: u64) -> BTreeMap<String, Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = [
        ("Arndt", 16, 0.905),
        ("Brenner", 120, 0.897),
        ("Castell", 40, 0.899),
        ("Dorn", 25, 0.921),
        ("Ehrling", 60, 0.898),
        ("Falk", 33, 0.912),
    ];
    spec.iter()
        .map(|&(name, n, mu)| (name.to_string(), (0..n).map(|_| mu + rng.gen_range(-0.02..0.02)).collect()))
        .collect()
}
