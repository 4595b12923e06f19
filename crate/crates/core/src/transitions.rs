//! Pitch-class transition counts, row-stochastic probabilities and sparse n-gram tables.

use std::collections::BTreeMap;
use std::io;
use std::ops::Add;

use thiserror::Error;

use crate::ingest::{PitchClass, PitchClassSequence, PITCH_CLASS_NAMES};
use crate::scalar::Real;

pub const MIN_NGRAM_ORDER: usize = 2;
pub const MAX_NGRAM_ORDER: usize = 8;

#[derive(Debug, Error)]
pub enum TransitionError {
    #[error("row {0} has no outgoing transitions; its probabilities are undefined")]
    UndefinedRow(PitchClass),
    #[error("n-gram order {0} outside {MIN_NGRAM_ORDER}..={MAX_NGRAM_ORDER}")]
    BadOrder(usize),
    #[error("row {row}: {reason}")]
    NotStochastic { row: PitchClass, reason: String },
    #[error("cannot subtract counts: entry {from}->{to} would go negative")]
    Underflow { from: PitchClass, to: PitchClass },
    #[error("matrix csv: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Number of decimal places used when writing probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decimals {
    /// Shortest representation that reads back to the same value.
    Full,
    Fixed(usize),
}

pub(crate) fn fmt_real<T: Real>(v: T, decimals: Decimals) -> String {
    match decimals {
        Decimals::Full => format!("{v}"),
        Decimals::Fixed(d) => format!("{v:.d$}"),
    }
}

/// Corpus-wide 12×12 bigram counts, read row (first note) to column (second note).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountMatrix {
    counts: [[u64; 12]; 12],
    total_bigrams: u64,
}

impl CountMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [[u64; 12]; 12]) -> Self {
        let total_bigrams = counts.iter().flatten().sum();
        CountMatrix { counts, total_bigrams }
    }

    pub fn counts(&self) -> &[[u64; 12]; 12] {
        &self.counts
    }

    pub fn get(&self, from: PitchClass, to: PitchClass) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn total_bigrams(&self) -> u64 {
        self.total_bigrams
    }

    pub fn row_total(&self, from: PitchClass) -> u64 {
        self.counts[from.index()].iter().sum()
    }

    pub fn add_bigram(&mut self, from: PitchClass, to: PitchClass) {
        self.counts[from.index()][to.index()] += 1;
        self.total_bigrams += 1;
    }

    /// Entrywise difference, used to take a piece back out of a corpus matrix.
    pub fn checked_sub(&self, other: &CountMatrix) -> Result<CountMatrix, TransitionError> {
        let mut out = [[0u64; 12]; 12];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.counts[i][j]
                    .checked_sub(other.counts[i][j])
                    .ok_or(TransitionError::Underflow { from: PitchClass::ALL[i], to: PitchClass::ALL[j] })?;
            }
        }
        Ok(CountMatrix::from_counts(out))
    }

    /// CSV with a label row and label column, C through B.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<(), TransitionError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(std::iter::once("").chain(PITCH_CLASS_NAMES))?;
        for (i, row) in self.counts.iter().enumerate() {
            let mut rec = vec![PITCH_CLASS_NAMES[i].to_string()];
            rec.extend(row.iter().map(u64::to_string));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(r: R) -> Result<CountMatrix, TransitionError> {
        let cells = read_labelled_grid(r)?;
        let mut counts = [[0u64; 12]; 12];
        for (i, row) in cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                counts[i][j] = cell
                    .replace(',', "")
                    .parse()
                    .map_err(|_| TransitionError::Format(format!("bad count {cell:?} at {i},{j}")))?;
            }
        }
        Ok(CountMatrix::from_counts(counts))
    }
}

fn read_labelled_grid<R: io::Read>(r: R) -> Result<Vec<Vec<String>>, TransitionError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header: Vec<String> = reader.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if header.len() != 13 || header[1..] != PITCH_CLASS_NAMES {
        return Err(TransitionError::Format(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::with_capacity(12);
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if i >= 12 || rec.len() != 13 || rec[0].trim() != PITCH_CLASS_NAMES[i] {
            return Err(TransitionError::Format(format!("unexpected row {i}: {rec:?}")));
        }
        rows.push(rec.iter().skip(1).map(|s| s.trim().to_string()).collect());
    }
    if rows.len() != 12 {
        return Err(TransitionError::Format(format!("expected 12 rows, found {}", rows.len())));
    }
    Ok(rows)
}

impl Add for CountMatrix {
    type Output = CountMatrix;

    fn add(self, rhs: CountMatrix) -> CountMatrix {
        merge_counts(&self, &rhs)
    }
}

impl std::iter::Sum for CountMatrix {
    fn sum<I: Iterator<Item = CountMatrix>>(iter: I) -> Self {
        iter.fold(CountMatrix::zero(), |a, b| a + b)
    }
}

/// One increment per adjacent pair; a sequence of n notes contributes n−1 bigrams.
pub fn count_transitions(seq: &PitchClassSequence) -> CountMatrix {
    let mut m = CountMatrix::zero();
    for (a, b) in seq.bigrams() {
        m.add_bigram(a, b);
    }
    m
}

pub fn merge_counts(a: &CountMatrix, b: &CountMatrix) -> CountMatrix {
    let mut counts = a.counts;
    for (row, other) in counts.iter_mut().zip(&b.counts) {
        for (c, o) in row.iter_mut().zip(other) {
            *c += o;
        }
    }
    CountMatrix { counts, total_bigrams: a.total_bigrams + b.total_bigrams }
}

/// P(next | current). Rows whose first note never occurs are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix<T = f64> {
    rows: [Option<[T; 12]>; 12],
}

pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

impl<T: Real> StochasticMatrix<T> {
    /// Every transition equally likely.
    pub fn uniform() -> Self {
        let p = T::one() / T::of(12.0);
        StochasticMatrix { rows: [Some([p; 12]); 12] }
    }

    /// Validates that each present row is a probability distribution.
    pub fn from_rows(rows: [Option<[T; 12]>; 12]) -> Result<Self, TransitionError> {
        let tol = T::of(ROW_SUM_TOLERANCE).max(T::epsilon() * T::of(16.0));
        for (i, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            let pc = PitchClass::ALL[i];
            if let Some(bad) = row.iter().find(|p| !(**p >= T::zero() && **p <= T::one())) {
                return Err(TransitionError::NotStochastic { row: pc, reason: format!("entry {bad} outside [0,1]") });
            }
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                return Err(TransitionError::NotStochastic { row: pc, reason: format!("row sums to {sum}") });
            }
        }
        Ok(StochasticMatrix { rows })
    }

    pub fn row(&self, from: PitchClass) -> Option<&[T; 12]> {
        self.rows[from.index()].as_ref()
    }

    pub fn rows(&self) -> &[Option<[T; 12]>; 12] {
        &self.rows
    }

    pub fn is_defined(&self, from: PitchClass) -> bool {
        self.rows[from.index()].is_some()
    }

    pub fn defined_rows(&self) -> Vec<PitchClass> {
        PitchClass::ALL.into_iter().filter(|p| self.is_defined(*p)).collect()
    }

    pub fn lookup(&self, from: PitchClass, to: PitchClass) -> Result<T, TransitionError> {
        self.row(from).map(|r| r[to.index()]).ok_or(TransitionError::UndefinedRow(from))
    }

    /// Smallest and largest probability over the defined rows.
    pub fn range(&self) -> Option<(T, T)> {
        self.rows.iter().flatten().flatten().fold(None, |acc, &p| match acc {
            None => Some((p, p)),
            Some((lo, hi)) => Some((lo.min(p), hi.max(p))),
        })
    }

    /// CSV with C..B labels; undefined rows are written as empty cells.
    pub fn write_csv<W: io::Write>(&self, w: W, decimals: Decimals) -> Result<(), TransitionError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(std::iter::once("").chain(PITCH_CLASS_NAMES))?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![PITCH_CLASS_NAMES[i].to_string()];
            match row {
                Some(r) => rec.extend(r.iter().map(|&p| fmt_real(p, decimals))),
                None => rec.extend(std::iter::repeat_n(String::new(), 12)),
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a matrix written by [`write_csv`](Self::write_csv). No row-sum validation,
    /// since rounded output need not sum to one.
    pub fn read_csv<R: io::Read>(r: R) -> Result<Self, TransitionError> {
        let cells = read_labelled_grid(r)?;
        let mut rows: [Option<[T; 12]>; 12] = [None; 12];
        for (i, row) in cells.iter().enumerate() {
            if row.iter().all(|c| c.is_empty()) {
                continue;
            }
            let mut vals = [T::zero(); 12];
            for (j, cell) in row.iter().enumerate() {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| TransitionError::Format(format!("bad probability {cell:?} at {i},{j}")))?;
                vals[j] = T::of(v);
            }
            rows[i] = Some(vals);
        }
        Ok(StochasticMatrix { rows })
    }
}

/// Divides each count by its row total.
pub fn normalize<T: Real>(c: &CountMatrix) -> StochasticMatrix<T> {
    let mut rows: [Option<[T; 12]>; 12] = [None; 12];
    for (i, counts) in c.counts.iter().enumerate() {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            continue;
        }
        let denom = T::of_u64(total);
        let mut row = [T::zero(); 12];
        for (p, &k) in row.iter_mut().zip(counts) {
            *p = T::of_u64(k) / denom;
        }
        rows[i] = Some(row);
    }
    StochasticMatrix { rows }
}

/// Sparse counts of contiguous pitch-class windows of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramCounts {
    order: usize,
    counts: BTreeMap<Vec<PitchClass>, u64>,
}

fn check_order(n: usize) -> Result<(), TransitionError> {
    if (MIN_NGRAM_ORDER..=MAX_NGRAM_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(TransitionError::BadOrder(n))
    }
}

impl NgramCounts {
    pub fn empty(order: usize) -> Result<Self, TransitionError> {
        check_order(order)?;
        Ok(NgramCounts { order, counts: BTreeMap::new() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, key: &[PitchClass]) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[PitchClass], u64)> {
        self.counts.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// Number of distinct windows observed.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn add_sequence(&mut self, seq: &PitchClassSequence) {
        for w in seq.notes().windows(self.order) {
            *self.counts.entry(w.to_vec()).or_insert(0) += 1;
        }
    }

    /// Sums two tables of the same order.
    pub fn merge(&mut self, other: &NgramCounts) -> Result<(), TransitionError> {
        if other.order != self.order {
            return Err(TransitionError::BadOrder(other.order));
        }
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        Ok(())
    }

    /// Entrywise difference; keys that reach zero are removed.
    pub fn checked_sub(&self, other: &NgramCounts) -> Result<NgramCounts, TransitionError> {
        if other.order != self.order {
            return Err(TransitionError::BadOrder(other.order));
        }
        let mut out = self.clone();
        for (k, v) in &other.counts {
            let entry = out
                .counts
                .get_mut(k)
                .filter(|c| **c >= *v)
                .ok_or(TransitionError::Underflow { from: k[0], to: k[k.len() - 1] })?;
            *entry -= v;
            if *entry == 0 {
                out.counts.remove(k);
            }
        }
        Ok(out)
    }

    /// Dense 12×12 view of an order-2 table.
    pub fn to_count_matrix(&self) -> Result<CountMatrix, TransitionError> {
        if self.order != 2 {
            return Err(TransitionError::BadOrder(self.order));
        }
        let mut counts = [[0u64; 12]; 12];
        for (k, &v) in &self.counts {
            counts[k[0].index()][k[1].index()] += v;
        }
        Ok(CountMatrix::from_counts(counts))
    }
}

pub fn count_ngrams(seq: &PitchClassSequence, n: usize) -> Result<NgramCounts, TransitionError> {
    let mut out = NgramCounts::empty(n)?;
    out.add_sequence(seq);
    Ok(out)
}
