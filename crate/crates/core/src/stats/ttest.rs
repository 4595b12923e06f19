use std::collections::BTreeMap;

use crate::scalar::Real;

use super::special::student_t_two_sided;
use super::{mean, round_display, sample_variance, StatsError};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TTestKind {
    /// Unequal variances, Welch–Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Pooled variance, n_a + n_b − 2 degrees of freedom.
    Pooled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TTestResult<T = f64> {
    pub t_stat: T,
    pub df: T,
    /// Two-sided.
    pub p_value: T,
    pub mean_a: T,
    pub mean_b: T,
    pub n_a: usize,
    pub n_b: usize,
}

impl<T: Real> TTestResult<T> {
    pub fn is_significant(&self, alpha: T) -> bool {
        self.p_value < alpha
    }

    /// `t=3.9945, p=0.0001`: both rounded to four places with trailing zeros dropped.
    pub fn summary(&self) -> String {
        format!("t={}, p={}", round_display(self.t_stat, 4), round_display(self.p_value, 4))
    }
}

pub fn welch_t_test<T: Real>(a: &[T], b: &[T]) -> Result<TTestResult<T>, StatsError> {
    two_sample_t_test(a, b, TTestKind::Welch)
}

pub fn two_sample_t_test<T: Real>(a: &[T], b: &[T], kind: TTestKind) -> Result<TTestResult<T>, StatsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatsError::TooFewSamples { n_a: a.len(), n_b: b.len() });
    }
    let (na, nb) = (T::of_usize(a.len()), T::of_usize(b.len()));
    let (mean_a, mean_b) = (mean(a), mean(b));
    let (var_a, var_b) = (sample_variance(a, mean_a), sample_variance(b, mean_b));
    if var_a.is_zero() && var_b.is_zero() {
        return Err(StatsError::ZeroVariance);
    }
    let one = T::one();
    let (se, df) = match kind {
        TTestKind::Welch => {
            let (qa, qb) = (var_a / na, var_b / nb);
            let s = qa + qb;
            (s.sqrt(), s * s / (qa * qa / (na - one) + qb * qb / (nb - one)))
        }
        TTestKind::Pooled => {
            let df = na + nb - T::of(2.0);
            let pooled = ((na - one) * var_a + (nb - one) * var_b) / df;
            ((pooled * (one / na + one / nb)).sqrt(), df)
        }
    };
    let t_stat = (mean_a - mean_b) / se;
    let p_value = student_t_two_sided(t_stat, df)?;
    Ok(TTestResult { t_stat, df, p_value, mean_a, mean_b, n_a: a.len(), n_b: b.len() })
}

#[derive(Debug, Clone)]
pub struct PairwiseTest<T = f64> {
    pub group_a: String,
    pub group_b: String,
    pub result: Result<TTestResult<T>, StatsError>,
}

impl<T: Real> PairwiseTest<T> {
    pub fn label(&self) -> String {
        format!("{} and {}", self.group_a, self.group_b)
    }
}

/// Every unordered pair of groups, in lexicographic order of group name.
/// Failures are kept per pair rather than aborting the batch.
pub fn pairwise_composer_tests<T: Real>(
    scores_by_composer: &BTreeMap<String, Vec<T>>,
    kind: TTestKind,
) -> Result<Vec<PairwiseTest<T>>, StatsError> {
    if scores_by_composer.len() < 2 {
        return Err(StatsError::TooFewGroups(scores_by_composer.len()));
    }
    let groups: Vec<(&String, &Vec<T>)> = scores_by_composer.iter().collect();
    let mut out = Vec::with_capacity(groups.len() * (groups.len() - 1) / 2);
    for (i, (name_a, a)) in groups.iter().enumerate() {
        for (name_b, b) in &groups[i + 1..] {
            out.push(PairwiseTest {
                group_a: (*name_a).clone(),
                group_b: (*name_b).clone(),
                result: two_sample_t_test(a, b, kind),
            });
        }
    }
    Ok(out)
}
