//! Melodic originality: one minus the mean transition probability of a piece's note moves.
//!
//! Three scorers share the same shape:
//!
//! * [`originality_all_notes`] averages over every adjacent pair in the piece.
//! * [`originality_simonton`] averages over the first five pairs only (the opening six notes).
//! * [`originality_ngram`] replaces pair probabilities with order-n conditional probabilities
//!   `count(window) / count(window prefix)`; unseen prefixes contribute zero.
//!
//! The transition matrix is built over the whole corpus including the scored piece unless
//! leave-one-out is requested through [`ScoringOptions`].

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{PieceId, PitchClassSequence};
use crate::scalar::Real;
use crate::transitions::{count_transitions, normalize, CountMatrix, NgramCounts, StochasticMatrix, TransitionError};

pub const SIMONTON_BIGRAMS: usize = 5;

#[derive(Debug, Error)]
pub enum OriginalityError {
    #[error("{piece}: {notes} note(s), at least {required} required")]
    TooShort { piece: PieceId, notes: usize, required: usize },
    #[error("{piece}: {source}")]
    UndefinedRow {
        piece: PieceId,
        #[source]
        source: TransitionError,
    },
    #[error("n-gram scoring needs order >= 3 with a context table of order n-1 (got {counts} / {context})")]
    BadOrder { counts: usize, context: usize },
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    AllNotes,
    Simonton,
    Ngram(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::AllNotes => f.write_str("all-notes"),
            Method::Simonton => f.write_str("simonton"),
            Method::Ngram(n) => write!(f, "ngram-{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OriginalityScore<T = f64> {
    pub piece_id: PieceId,
    pub method: Method,
    pub value: T,
    /// Number of transitions (or n-gram windows) averaged.
    pub bigram_count: usize,
}

fn require_len(seq: &PitchClassSequence, required: usize) -> Result<(), OriginalityError> {
    if seq.note_count() < required {
        Err(OriginalityError::TooShort { piece: seq.piece_id.clone(), notes: seq.note_count(), required })
    } else {
        Ok(())
    }
}

/// `1 - mean(probabilities)`, summed in sequence order.
fn one_minus_mean<T: Real>(probs: impl Iterator<Item = T>) -> (T, usize) {
    let mut sum = T::zero();
    let mut count = 0usize;
    for p in probs {
        sum = sum + p;
        count += 1;
    }
    (T::one() - sum / T::of_usize(count), count)
}

fn score_pairs<T: Real>(
    seq: &PitchClassSequence,
    m: &StochasticMatrix<T>,
    limit: usize,
    method: Method,
) -> Result<OriginalityScore<T>, OriginalityError> {
    let probs = seq
        .bigrams()
        .take(limit)
        .map(|(a, b)| m.lookup(a, b))
        .collect::<Result<Vec<T>, _>>()
        .map_err(|source| OriginalityError::UndefinedRow { piece: seq.piece_id.clone(), source })?;
    let (value, bigram_count) = one_minus_mean(probs.into_iter());
    Ok(OriginalityScore { piece_id: seq.piece_id.clone(), method, value, bigram_count })
}

pub fn originality_all_notes<T: Real>(
    seq: &PitchClassSequence,
    m: &StochasticMatrix<T>,
) -> Result<OriginalityScore<T>, OriginalityError> {
    require_len(seq, 2)?;
    score_pairs(seq, m, usize::MAX, Method::AllNotes)
}

pub fn originality_simonton<T: Real>(
    seq: &PitchClassSequence,
    m: &StochasticMatrix<T>,
) -> Result<OriginalityScore<T>, OriginalityError> {
    require_len(seq, SIMONTON_BIGRAMS + 1)?;
    score_pairs(seq, m, SIMONTON_BIGRAMS, Method::Simonton)
}

/// Conditional probability of each length-n window given its length-(n−1) prefix.
/// Windows whose prefix was never seen get probability zero.
pub fn ngram_window_probabilities<T: Real>(
    seq: &PitchClassSequence,
    counts: &NgramCounts,
    context: &NgramCounts,
) -> Result<Vec<T>, OriginalityError> {
    let n = counts.order();
    if n < 3 || context.order() + 1 != n {
        return Err(OriginalityError::BadOrder { counts: n, context: context.order() });
    }
    require_len(seq, n)?;
    Ok(seq
        .notes()
        .windows(n)
        .map(|w| {
            let prefix = context.get(&w[..n - 1]);
            if prefix == 0 {
                T::zero()
            } else {
                // Prefix counts include windows at sequence ends with no continuation,
                // so the ratio stays within [0, 1].
                (T::of_u64(counts.get(w)) / T::of_u64(prefix)).min(T::one())
            }
        })
        .collect())
}

pub fn originality_ngram<T: Real>(
    seq: &PitchClassSequence,
    counts: &NgramCounts,
    context: &NgramCounts,
) -> Result<OriginalityScore<T>, OriginalityError> {
    let probs = ngram_window_probabilities::<T>(seq, counts, context)?;
    let unseen = probs.iter().filter(|p| p.is_zero()).count();
    if unseen > 0 {
        log::debug!("{}: {unseen} of {} windows unseen in the corpus", seq.piece_id, probs.len());
    }
    let (value, bigram_count) = one_minus_mean(probs.into_iter());
    Ok(OriginalityScore { piece_id: seq.piece_id.clone(), method: Method::Ngram(counts.order()), value, bigram_count })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScoringOptions {
    /// Remove each piece's own transitions from the corpus model before scoring it.
    pub leave_one_out: bool,
}

/// Per-piece outcome of [`score_corpus`].
pub type PieceScore<T> = (PieceId, Result<OriginalityScore<T>, OriginalityError>);

/// Builds the corpus model and scores every piece; results come back sorted by piece id.
pub fn score_corpus<T: Real>(
    pieces: &[PitchClassSequence],
    method: Method,
    options: ScoringOptions,
) -> Result<Vec<PieceScore<T>>, OriginalityError> {
    let mut out: Vec<_> = match method {
        Method::AllNotes | Method::Simonton => {
            let per_piece: Vec<CountMatrix> = pieces.par_iter().map(count_transitions).collect();
            let corpus: CountMatrix = per_piece.iter().copied().sum();
            let shared = normalize::<T>(&corpus);
            let scorer = |seq: &PitchClassSequence, m: &StochasticMatrix<T>| match method {
                Method::Simonton => originality_simonton(seq, m),
                _ => originality_all_notes(seq, m),
            };
            pieces
                .par_iter()
                .zip(per_piece.par_iter())
                .map(|(seq, own)| {
                    let result = if options.leave_one_out {
                        corpus
                            .checked_sub(own)
                            .map_err(OriginalityError::from)
                            .and_then(|rest| scorer(seq, &normalize::<T>(&rest)))
                    } else {
                        scorer(seq, &shared)
                    };
                    (seq.piece_id.clone(), result)
                })
                .collect()
        }
        Method::Ngram(n) => {
            if n < 3 {
                return Err(OriginalityError::BadOrder { counts: n, context: n.saturating_sub(1) });
            }
            let mut counts = NgramCounts::empty(n)?;
            let mut context = NgramCounts::empty(n - 1)?;
            for seq in pieces {
                counts.add_sequence(seq);
                context.add_sequence(seq);
            }
            pieces
                .par_iter()
                .map(|seq| {
                    let result = if options.leave_one_out {
                        let mut own = NgramCounts::empty(n).expect("order checked");
                        own.add_sequence(seq);
                        let mut own_ctx = NgramCounts::empty(n - 1).expect("order checked");
                        own_ctx.add_sequence(seq);
                        counts
                            .checked_sub(&own)
                            .and_then(|c| Ok((c, context.checked_sub(&own_ctx)?)))
                            .map_err(OriginalityError::from)
                            .and_then(|(c, ctx)| originality_ngram(seq, &c, &ctx))
                    } else {
                        originality_ngram(seq, &counts, &context)
                    };
                    (seq.piece_id.clone(), result)
                })
                .collect()
        }
    };
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// A scored piece with the metadata shown in the ranked table.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInput<T = f64> {
    pub title: String,
    pub composer: String,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPiece<T = f64> {
    pub rank: usize,
    pub title: String,
    pub composer: String,
    pub value: T,
}

impl<T: Real> RankedPiece<T> {
    /// `[rank, title, composer, originality to 4 decimals]`.
    pub fn row(&self) -> [String; 4] {
        [self.rank.to_string(), self.title.clone(), self.composer.clone(), format!("{:.4}", self.value)]
    }
}

/// Top `k` by descending value; equal values ordered by title.
pub fn rank_pieces<T: Real>(scores: &[RankInput<T>], k: usize) -> Vec<RankedPiece<T>> {
    let mut sorted: Vec<&RankInput<T>> = scores.iter().collect();
    sorted.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal).then_with(|| a.title.cmp(&b.title)));
    sorted
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, s)| RankedPiece { rank: i + 1, title: s.title.clone(), composer: s.composer.clone(), value: s.value })
        .collect()
}
