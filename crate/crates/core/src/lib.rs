//! Pitch-class transition models and melodic originality scoring for MIDI corpora,
//! with the popularity lookup, statistics and reports built on top of them.

pub mod ingest;
pub mod originality;
pub mod popularity;
pub mod report;
mod scalar;
pub mod stats;
pub mod transitions;

pub use ingest::{PieceId, PitchClass, PitchClassSequence};
pub use originality::{Method, OriginalityScore};
pub use scalar::Real;
pub use transitions::{CountMatrix, NgramCounts, StochasticMatrix};

pub type StochasticMatrixF64 = StochasticMatrix<f64>;
pub type StochasticMatrixF32 = StochasticMatrix<f32>;
pub type OriginalityScoreF64 = OriginalityScore<f64>;
pub type OriginalityScoreF32 = OriginalityScore<f32>;
pub type RegressionResultF64 = stats::RegressionResult<f64>;
pub type RegressionResultF32 = stats::RegressionResult<f32>;
pub type OlsResultF64 = stats::OlsResult<f64>;
pub type OlsResultF32 = stats::OlsResult<f32>;
pub type TTestResultF64 = stats::TTestResult<f64>;
pub type TTestResultF32 = stats::TTestResult<f32>;
pub type QuadraticFitF64 = stats::QuadraticFit<f64>;
pub type QuadraticFitF32 = stats::QuadraticFit<f32>;
