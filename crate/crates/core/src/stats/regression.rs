use crate::scalar::Real;

use super::special::{chi2_2df_sf, f_1_d_sf, student_t_quantile, student_t_two_sided};
use super::{mean, StatsError};

/// Simple least-squares line with intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult<T = f64> {
    pub slope: T,
    pub intercept: T,
    /// Pearson correlation.
    pub r: T,
    pub r_squared: T,
    /// Two-sided test of zero slope, Student t with n−2 degrees of freedom.
    pub p_value: T,
    pub stderr_slope: T,
    pub n: usize,
}

impl<T: Real> RegressionResult<T> {
    pub fn predict(&self, x: T) -> T {
        self.intercept + self.slope * x
    }
}

fn check_lengths<T>(x: &[T], y: &[T], min: usize) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { x: x.len(), y: y.len() });
    }
    if x.len() < min {
        return Err(StatsError::TooFewPoints { needed: min, got: x.len() });
    }
    Ok(())
}

pub fn linear_regression<T: Real>(x: &[T], y: &[T]) -> Result<RegressionResult<T>, StatsError> {
    check_lengths(x, y, 3)?;
    let n = x.len();
    let x_bar = mean(x);
    let y_bar = mean(y);
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_bar;
        let dy = yi - y_bar;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sxy = sxy + dx * dy;
    }
    if sxx.is_zero() {
        return Err(StatsError::DegenerateX);
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let df = T::of_usize(n - 2);

    if syy.is_zero() {
        // Constant y: the flat line fits exactly and there is no evidence of a slope.
        return Ok(RegressionResult {
            slope,
            intercept,
            r: T::zero(),
            r_squared: T::zero(),
            p_value: T::one(),
            stderr_slope: T::zero(),
            n,
        });
    }

    let r = (sxy / (sxx.sqrt() * syy.sqrt())).max(-T::one()).min(T::one());
    let ssr: T = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let e = (yi - y_bar) - slope * (xi - x_bar);
            e * e
        })
        .sum();
    let one_minus_r2 = (ssr / syy).min(T::one());
    let stderr_slope = (one_minus_r2 * syy / sxx / df).max(T::zero()).sqrt();
    let p_value = if one_minus_r2 <= T::zero() {
        T::zero()
    } else {
        let t = r * (df / one_minus_r2).sqrt();
        student_t_two_sided(t, df)?
    };
    Ok(RegressionResult { slope, intercept, r, r_squared: r * r, p_value, stderr_slope, n })
}

/// Regression through the origin, `y ≈ coef · x`, with the usual diagnostics.
///
/// R² and its adjusted form are uncentered. Skew and kurtosis are the biased
/// sample moments of the residuals about their mean; `kurtosis` is Pearson's
/// (3 for a normal sample) while Jarque–Bera uses the excess.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsResult<T = f64> {
    pub coef: T,
    pub stderr: T,
    pub t_stat: T,
    pub p_value: T,
    pub ci_low: T,
    pub ci_high: T,
    pub r2_uncentered: T,
    pub r2_adj_uncentered: T,
    pub f_stat: T,
    pub f_p_value: T,
    pub log_likelihood: T,
    pub aic: T,
    pub bic: T,
    pub durbin_watson: T,
    pub jarque_bera: T,
    pub jb_p: T,
    pub skew: T,
    pub kurtosis: T,
    pub n: usize,
}

impl<T: Real> OlsResult<T> {
    pub fn df_resid(&self) -> usize {
        self.n - 1
    }

    pub fn predict(&self, x: T) -> T {
        self.coef * x
    }
}

pub fn ols_no_intercept<T: Real>(y: &[T], x: &[T]) -> Result<OlsResult<T>, StatsError> {
    check_lengths(x, y, 2)?;
    let n = x.len();
    let sxx: T = x.iter().map(|&v| v * v).sum();
    if sxx.is_zero() {
        return Err(StatsError::DegenerateX);
    }
    let sxy: T = x.iter().zip(y).map(|(&a, &b)| a * b).sum();
    let syy: T = y.iter().map(|&v| v * v).sum();
    let coef = sxy / sxx;
    let resid: Vec<T> = x.iter().zip(y).map(|(&a, &b)| b - coef * a).collect();
    let ssr: T = resid.iter().map(|&e| e * e).sum();

    let nf = T::of_usize(n);
    let df = T::of_usize(n - 1);
    let stderr = (ssr / df / sxx).sqrt();
    let t_stat = coef / stderr;
    let p_value = if stderr.is_zero() { T::zero() } else { student_t_two_sided(t_stat, df)? };
    let t_crit = student_t_quantile(T::of(0.975), df)?;
    let r2 = T::one() - ssr / syy;
    let r2_adj = T::one() - nf / df * (T::one() - r2);
    // Model sum of squares is uncentered with no constant: Σ ŷ² = coef² Σx².
    let ess = coef * coef * sxx;
    let f_stat = ess / (ssr / df);
    let f_p_value = if ssr.is_zero() { T::zero() } else { f_1_d_sf(f_stat, df)? };

    let two_pi = T::of(2.0 * std::f64::consts::PI);
    let half_n = nf * T::of(0.5);
    let log_likelihood = -half_n * two_pi.ln() - half_n * (ssr / nf).ln() - half_n;
    let k = T::one();
    let aic = T::of(-2.0) * log_likelihood + T::of(2.0) * k;
    let bic = T::of(-2.0) * log_likelihood + k * nf.ln();

    let dw_num: T = resid.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    let durbin_watson = dw_num / ssr;

    let e_bar = mean(&resid);
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &e in &resid {
        let d = e - e_bar;
        let d2 = d * d;
        m2 = m2 + d2;
        m3 = m3 + d2 * d;
        m4 = m4 + d2 * d2;
    }
    m2 = m2 / nf;
    m3 = m3 / nf;
    m4 = m4 / nf;
    let skew = m3 / m2.powf(T::of(1.5));
    let kurtosis = m4 / (m2 * m2);
    let excess = kurtosis - T::of(3.0);
    let jarque_bera = nf / T::of(6.0) * (skew * skew + excess * excess / T::of(4.0));
    let jb_p = chi2_2df_sf(jarque_bera);

    Ok(OlsResult {
        coef,
        stderr,
        t_stat,
        p_value,
        ci_low: coef - t_crit * stderr,
        ci_high: coef + t_crit * stderr,
        r2_uncentered: r2,
        r2_adj_uncentered: r2_adj,
        f_stat,
        f_p_value,
        log_likelihood,
        aic,
        bic,
        durbin_watson,
        jarque_bera,
        jb_p,
        skew,
        kurtosis,
        n,
    })
}
