//! Regression, t-tests and the distribution functions behind their p-values.

mod quadratic;
mod regression;
pub mod special;
mod ttest;

use thiserror::Error;

use crate::scalar::Real;

pub use quadratic::{quadratic_fit, QuadraticFit};
pub use regression::{linear_regression, ols_no_intercept, OlsResult, RegressionResult};
pub use special::{student_t_cdf, student_t_quantile, student_t_sf, student_t_two_sided};
pub use ttest::{
    pairwise_composer_tests, two_sample_t_test, welch_t_test, PairwiseTest, TTestKind, TTestResult, DEFAULT_ALPHA,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("x has {x} values but y has {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("regressor has no variation")]
    DegenerateX,
    #[error("each sample needs at least 2 values (got {n_a} and {n_b})")]
    TooFewSamples { n_a: usize, n_b: usize },
    #[error("both samples are constant; t is undefined")]
    ZeroVariance,
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("least-squares system is singular")]
    SingularSystem,
    #[error("degrees of freedom must be positive and finite, got {0}")]
    BadDf(f64),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("argument out of domain: {0}")]
    Domain(String),
}

pub(crate) fn mean<T: Real>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::of_usize(v.len())
}

pub(crate) fn sample_variance<T: Real>(v: &[T], mean: T) -> T {
    v.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / T::of_usize(v.len() - 1)
}

/// Rounds to `places` decimals and prints the shortest form, keeping at least one
/// digit after the point: `5.348`, `0.0`, `-0.9682`.
pub fn round_display<T: Real>(v: T, places: usize) -> String {
    let v = v.to_f64_lossy();
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.places$}").parse().expect("formatted float parses");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    let s = format!("{rounded}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}
