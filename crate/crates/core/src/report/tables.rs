use std::fmt::Write as _;
use std::path::Path;

use super::figures::write_file;
use super::ReportError;
use crate::originality::RankedPiece;
use crate::scalar::Real;
use crate::stats::{OlsResult, PairwiseTest, QuadraticFit, RegressionResult};

fn csv_bytes<I, R>(path: &Path, rows: I) -> Result<Vec<u8>, ReportError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).map_err(|e| ReportError::csv(path, e))?;
    }
    w.into_inner().map_err(|e| ReportError::io(path, e.into_error()))
}

fn write_key_values(path: &Path, rows: Vec<(&str, String)>) -> Result<(), ReportError> {
    let all = std::iter::once(["statistic".to_string(), "value".to_string()])
        .chain(rows.into_iter().map(|(k, v)| [k.to_string(), v]));
    write_file(path, &csv_bytes(path, all)?)
}

pub const RANKED_HEADER: [&str; 4] = ["Rank", "Title", "Composer", "Melodic Originality"];

pub fn write_ranked_table<T: Real>(rows: &[RankedPiece<T>], path: &Path) -> Result<(), ReportError> {
    let all = std::iter::once(RANKED_HEADER.map(String::from)).chain(rows.iter().map(RankedPiece::row));
    write_file(path, &csv_bytes(path, all)?)
}

pub fn write_regression_csv<T: Real>(r: &RegressionResult<T>, path: &Path) -> Result<(), ReportError> {
    write_key_values(
        path,
        vec![
            ("n", r.n.to_string()),
            ("slope", r.slope.to_string()),
            ("intercept", r.intercept.to_string()),
            ("r", r.r.to_string()),
            ("r_squared", r.r_squared.to_string()),
            ("p_value", r.p_value.to_string()),
            ("stderr_slope", r.stderr_slope.to_string()),
        ],
    )
}

pub fn write_quadratic_csv<T: Real>(q: &QuadraticFit<T>, path: &Path) -> Result<(), ReportError> {
    write_key_values(
        path,
        vec![
            ("n", q.n.to_string()),
            ("c0", q.c0.to_string()),
            ("c1", q.c1.to_string()),
            ("c2", q.c2.to_string()),
            ("r_squared", q.r_squared.to_string()),
            ("inverted_u", q.is_inverted_u().to_string()),
        ],
    )
}

pub fn write_ols_csv<T: Real>(o: &OlsResult<T>, path: &Path) -> Result<(), ReportError> {
    write_key_values(
        path,
        vec![
            ("n", o.n.to_string()),
            ("df_resid", o.df_resid().to_string()),
            ("coef", o.coef.to_string()),
            ("std_err", o.stderr.to_string()),
            ("t", o.t_stat.to_string()),
            ("p_value", o.p_value.to_string()),
            ("ci_low", o.ci_low.to_string()),
            ("ci_high", o.ci_high.to_string()),
            ("r_squared_uncentered", o.r2_uncentered.to_string()),
            ("adj_r_squared_uncentered", o.r2_adj_uncentered.to_string()),
            ("f_statistic", o.f_stat.to_string()),
            ("f_p_value", o.f_p_value.to_string()),
            ("log_likelihood", o.log_likelihood.to_string()),
            ("aic", o.aic.to_string()),
            ("bic", o.bic.to_string()),
            ("durbin_watson", o.durbin_watson.to_string()),
            ("jarque_bera", o.jarque_bera.to_string()),
            ("jb_p_value", o.jb_p.to_string()),
            ("skew", o.skew.to_string()),
            ("kurtosis", o.kurtosis.to_string()),
        ],
    )
}

/// printf-style `%.{sig}g`: shortest of fixed or exponent form, trailing zeros removed.
pub fn format_g(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

const WIDTH: usize = 78;

fn pair_row(out: &mut String, l: (&str, String), r: (&str, String)) {
    let _ = writeln!(out, "{:<20}{:>19}   {:<28}{:>8}", l.0, l.1, r.0, r.1);
}

/// Regression-through-origin summary laid out like a conventional OLS results table.
pub fn ols_report<T: Real>(o: &OlsResult<T>, dep_name: &str, regressor_name: &str) -> String {
    let f = |v: T| v.to_f64_lossy();
    let rule = "=".repeat(WIDTH);
    let mut s = String::new();
    let _ = writeln!(s, "{:^WIDTH$}", "OLS Regression Results");
    let _ = writeln!(s, "{rule}");
    pair_row(
        &mut s,
        ("Dep. Variable:", dep_name.into()),
        ("R-squared (uncentered):", format!("{:.3}", f(o.r2_uncentered))),
    );
    pair_row(
        &mut s,
        ("Model:", "OLS".into()),
        ("Adj. R-squared (uncentered):", format!("{:.3}", f(o.r2_adj_uncentered))),
    );
    pair_row(&mut s, ("Method:", "Least Squares".into()), ("F-statistic:", format_g(f(o.f_stat), 4)));
    pair_row(&mut s, ("No. Observations:", o.n.to_string()), ("Prob (F-statistic):", format_g(f(o.f_p_value), 3)));
    pair_row(
        &mut s,
        ("Df Residuals:", o.df_resid().to_string()),
        ("Log-Likelihood:", format_g(f(o.log_likelihood), 5)),
    );
    pair_row(&mut s, ("Df Model:", "1".into()), ("AIC:", format_g(f(o.aic), 4)));
    pair_row(&mut s, ("Covariance Type:", "nonrobust".into()), ("BIC:", format_g(f(o.bic), 4)));
    let _ = writeln!(s, "{rule}");
    let _ = writeln!(
        s,
        "{:<12}{:>11}{:>11}{:>11}{:>11}{:>11}{:>11}",
        "", "coef", "std err", "t", "P>|t|", "[0.025", "0.975]"
    );
    let _ = writeln!(s, "{}", "-".repeat(WIDTH));
    let name: String = regressor_name.chars().take(11).collect();
    let _ = writeln!(
        s,
        "{:<12}{:>11}{:>11}{:>11}{:>11}{:>11}{:>11}",
        name,
        format_g(f(o.coef), 4),
        format_g(f(o.stderr), 3),
        format!("{:.3}", f(o.t_stat)),
        format!("{:.3}", f(o.p_value)),
        format_g(f(o.ci_low), 3),
        format_g(f(o.ci_high), 3),
    );
    let _ = writeln!(s, "{rule}");
    pair_row(
        &mut s,
        ("Durbin-Watson:", format!("{:.3}", f(o.durbin_watson))),
        ("Jarque-Bera (JB):", format!("{:.3}", f(o.jarque_bera))),
    );
    pair_row(&mut s, ("Skew:", format!("{:.3}", f(o.skew))), ("Prob(JB):", format_g(f(o.jb_p), 3)));
    let _ = writeln!(s, "{:<20}{:>19}", "Kurtosis:", format!("{:.3}", f(o.kurtosis)));
    let _ = writeln!(s, "{rule}");
    s.push_str("Notes:\n");
    s.push_str(
        "[1] R-squared is computed without centering (uncentered) since the model does not contain a constant.\n",
    );
    s.push_str("[2] Standard errors assume that the covariance matrix of the errors is correctly specified.\n");
    s
}

pub const TTEST_HEADER: [&str; 11] =
    ["Index", "Test", "Results", "t", "df", "p_value", "mean_a", "mean_b", "n_a", "n_b", "significant"];

/// Numbered rows of `A and B:  t=…, p=…`, flagged with `*` when p < alpha.
pub fn ttest_text<T: Real>(tests: &[PairwiseTest<T>], alpha: T) -> String {
    let width = tests.iter().map(|t| t.label().chars().count() + 1).max().unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "{:<4}{:<width$}  Results", "#", "Test");
    let mut significant = 0;
    for (i, t) in tests.iter().enumerate() {
        let label = format!("{}:", t.label());
        match &t.result {
            Ok(r) => {
                let flag = if r.is_significant(alpha) {
                    significant += 1;
                    "  *"
                } else {
                    ""
                };
                let _ = writeln!(s, "{:<4}{label:<width$}  {}{flag}", i + 1, r.summary());
            }
            Err(e) => {
                let _ = writeln!(s, "{:<4}{label:<width$}  error: {e}", i + 1);
            }
        }
    }
    let _ = writeln!(
        s,
        "\n{significant} of {} tests significant at alpha = {} (marked *)",
        tests.len(),
        alpha.to_f64_lossy()
    );
    s
}

pub fn write_ttest_table<T: Real>(
    tests: &[PairwiseTest<T>],
    alpha: T,
    csv_path: &Path,
    txt_path: &Path,
) -> Result<(), ReportError> {
    let rows = tests.iter().enumerate().map(|(i, t)| match &t.result {
        Ok(r) => vec![
            (i + 1).to_string(),
            t.label(),
            r.summary(),
            r.t_stat.to_string(),
            r.df.to_string(),
            r.p_value.to_string(),
            r.mean_a.to_string(),
            r.mean_b.to_string(),
            r.n_a.to_string(),
            r.n_b.to_string(),
            r.is_significant(alpha).to_string(),
        ],
        Err(e) => {
            let mut row = vec![(i + 1).to_string(), t.label(), format!("error: {e}")];
            row.resize(TTEST_HEADER.len(), String::new());
            row
        }
    });
    let all = std::iter::once(TTEST_HEADER.iter().map(|h| h.to_string()).collect()).chain(rows);
    write_file(csv_path, &csv_bytes(csv_path, all)?)?;
    write_file(txt_path, ttest_text(tests, alpha).as_bytes())
}
