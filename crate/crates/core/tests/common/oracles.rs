//! Independent reference computations: quadrature for the t tail, exact
//! rational arithmetic for the fits and tests, de Bruijn corpora.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(30).unwrap()))
}

/// ∫ cos^(ν−1) θ dθ over [a, b] with 0 <= a <= b <= π/2. Uniform panels, the one
/// touching π/2 refined geometrically for the endpoint behaviour when ν < 2.
fn cos_power_integral(nu: f64, a: f64, b: f64) -> f64 {
    let f = |theta: f64| {
        let c = theta.cos();
        if c <= 0.0 {
            0.0
        } else {
            ((nu - 1.0) * c.ln()).exp()
        }
    };
    let panels = 240;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels - 1 {
        let lo = a + h * k as f64;
        total += rule().integrate(lo, lo + h, f);
    }
    let (mut lo, hi) = (a + h * (panels - 1) as f64, b);
    for _ in 0..48 {
        let mid = lo + (hi - lo) / 2.0;
        total += rule().integrate(lo, mid, f);
        lo = mid;
    }
    total + rule().integrate(lo, hi, f)
}

/// Upper tail of Student's t for ν >= 1 via the substitution t = √ν·tan θ.
pub fn t_sf_quadrature(t: f64, nu: f64) -> f64 {
    assert!(nu >= 1.0, "quadrature oracle covers ν >= 1");
    let half = std::f64::consts::FRAC_PI_2;
    let theta0 = (t / nu.sqrt()).atan();
    let denom = 2.0 * cos_power_integral(nu, 0.0, half);
    let numer = if theta0 >= 0.0 {
        cos_power_integral(nu, theta0, half)
    } else {
        cos_power_integral(nu, 0.0, -theta0) + cos_power_integral(nu, 0.0, half)
    };
    numer / denom
}

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn qi(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn f(r: &BigRational) -> f64 {
    r.to_f64().expect("representable")
}

fn sum(v: impl IntoIterator<Item = BigRational>) -> BigRational {
    v.into_iter().fold(BigRational::zero(), |a, b| a + b)
}

fn mean(v: &[BigRational]) -> BigRational {
    sum(v.iter().cloned()) / qi(v.len())
}

fn qs(v: &[f64]) -> Vec<BigRational> {
    v.iter().map(|&x| q(x)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct LineOracle {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
    pub r_squared: f64,
    pub t: f64,
    pub p_value: f64,
}

/// Least-squares line with intercept, exact up to the final square roots.
pub fn line(x: &[f64], y: &[f64]) -> LineOracle {
    let (x, y) = (qs(x), qs(y));
    let n = x.len();
    let (mx, my) = (mean(&x), mean(&y));
    let sxx = sum(x.iter().map(|v| (v - &mx) * (v - &mx)));
    let syy = sum(y.iter().map(|v| (v - &my) * (v - &my)));
    let sxy = sum(x.iter().zip(&y).map(|(a, b)| (a - &mx) * (b - &my)));
    let slope = &sxy / &sxx;
    let intercept = &my - &slope * &mx;
    let (r_squared, t) = if syy.is_zero() {
        (0.0, 0.0)
    } else {
        let r2 = &sxy * &sxy / (&sxx * &syy);
        let one_minus = qi(1) - &r2;
        let t = if one_minus.is_zero() { f64::INFINITY } else { f(&(&r2 * qi(n - 2) / one_minus)).sqrt() };
        (f(&r2), if sxy.is_negative() { -t } else { t })
    };
    let r = if sxy.is_negative() { -r_squared.sqrt() } else { r_squared.sqrt() };
    let p_value = if t.is_infinite() { 0.0 } else { (2.0 * t_sf_quadrature(t.abs(), (n - 2) as f64)).min(1.0) };
    LineOracle { slope: f(&slope), intercept: f(&intercept), r, r_squared, t, p_value }
}

#[derive(Debug, Clone, Copy)]
pub struct OlsOracle {
    pub coef: f64,
    pub stderr: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub r2_uncentered: f64,
    pub r2_adj_uncentered: f64,
    pub f_stat: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub durbin_watson: f64,
    pub skew: f64,
    pub kurtosis: f64,
    pub jarque_bera: f64,
    pub jb_p: f64,
}

/// Regression of y on x without a constant.
pub fn ols(y: &[f64], x: &[f64]) -> OlsOracle {
    let (x, y) = (qs(x), qs(y));
    let n = x.len();
    let sxx = sum(x.iter().map(|v| v * v));
    let sxy = sum(x.iter().zip(&y).map(|(a, b)| a * b));
    let syy = sum(y.iter().map(|v| v * v));
    let coef = &sxy / &sxx;
    let resid: Vec<BigRational> = x.iter().zip(&y).map(|(a, b)| b - &coef * a).collect();
    let ssr = sum(resid.iter().map(|e| e * e));
    let df = qi(n - 1);
    let stderr = f(&(&ssr / &df / &sxx)).sqrt();
    let t_stat = f(&coef) / stderr;
    let r2 = qi(1) - &ssr / &syy;
    let r2_adj = qi(1) - qi(n) / &df * (qi(1) - &r2);
    let f_stat = f(&((&syy - &ssr) / (&ssr / &df)));
    let nf = n as f64;
    let llf = -nf / 2.0 * ((2.0 * std::f64::consts::PI).ln() + (f(&ssr) / nf).ln() + 1.0);
    let dw = sum(resid.windows(2).map(|w| (&w[1] - &w[0]) * (&w[1] - &w[0]))) / &ssr;
    let me = mean(&resid);
    let central = |k: u32| mean(&resid.iter().map(|e| num_traits::pow(e - &me, k as usize)).collect::<Vec<_>>());
    let (m2, m3, m4) = (f(&central(2)), f(&central(3)), f(&central(4)));
    let skew = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jarque_bera = nf / 6.0 * (skew * skew + (kurtosis - 3.0).powi(2) / 4.0);
    OlsOracle {
        coef: f(&coef),
        stderr,
        t_stat,
        p_value: (2.0 * t_sf_quadrature(t_stat.abs(), nf - 1.0)).min(1.0),
        r2_uncentered: f(&r2),
        r2_adj_uncentered: f(&r2_adj),
        f_stat,
        log_likelihood: llf,
        aic: -2.0 * llf + 2.0,
        bic: -2.0 * llf + nf.ln(),
        durbin_watson: f(&dw),
        skew,
        kurtosis,
        jarque_bera,
        jb_p: (-jarque_bera / 2.0).exp(),
    }
}

/// Quadratic least squares via exact normal equations: `[c0, c1, c2]` and centered R².
pub fn quadratic(x: &[f64], y: &[f64]) -> ([f64; 3], f64) {
    let (x, y) = (qs(x), qs(y));
    let pw = |v: &BigRational, k: usize| num_traits::pow(v.clone(), k);
    let s = |k: usize| sum(x.iter().map(|v| pw(v, k)));
    let t = |k: usize| sum(x.iter().zip(&y).map(|(a, b)| pw(a, k) * b));
    let mut m: Vec<Vec<BigRational>> = (0..3)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..3).map(|j| s(i + j)).collect();
            row.push(t(i));
            row
        })
        .collect();
    for col in 0..3 {
        let pivot = (col..3).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, pivot);
        for r in 0..3 {
            if r != col && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (cell, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *cell -= p * &factor;
                }
            }
        }
    }
    let c: Vec<BigRational> = (0..3).map(|i| &m[i][3] / &m[i][i]).collect();
    let my = mean(&y);
    let sst = sum(y.iter().map(|v| (v - &my) * (v - &my)));
    let ssr = sum(x.iter().zip(&y).map(|(a, b)| {
        let e = b - (&c[0] + &c[1] * a + &c[2] * a * a);
        &e * &e
    }));
    ([f(&c[0]), f(&c[1]), f(&c[2])], f(&(qi(1) - ssr / sst)))
}

#[derive(Debug, Clone, Copy)]
pub struct TOracle {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

/// Two-sample t statistic, Welch or pooled, exact until the square root.
pub fn two_sample(a: &[f64], b: &[f64], pooled: bool) -> TOracle {
    let (a, b) = (qs(a), qs(b));
    let (na, nb) = (qi(a.len()), qi(b.len()));
    let (ma, mb) = (mean(&a), mean(&b));
    let var = |v: &[BigRational], m: &BigRational| sum(v.iter().map(|x| (x - m) * (x - m))) / qi(v.len() - 1);
    let (va, vb) = (var(&a, &ma), var(&b, &mb));
    let one = qi(1);
    let (se2, df) = if pooled {
        let df = &na + &nb - qi(2);
        let sp = ((&na - &one) * &va + (&nb - &one) * &vb) / &df;
        (sp * (&one / &na + &one / &nb), df)
    } else {
        let (qa, qb) = (&va / &na, &vb / &nb);
        let s = &qa + &qb;
        let df = &s * &s / (&qa * &qa / (&na - &one) + &qb * &qb / (&nb - &one));
        (s, df)
    };
    let diff = &ma - &mb;
    let t2 = f(&(&diff * &diff / se2));
    let t = if diff.is_negative() { -t2.sqrt() } else { t2.sqrt() };
    let df = f(&df);
    TOracle { t, df, p_value: (2.0 * t_sf_quadrature(t.abs(), df)).min(1.0) }
}

/// Linear de Bruijn sequence B(12, 2): every ordered pair of pitch classes once.
pub fn de_bruijn_12() -> Vec<u8> {
    fn db(t: usize, p: usize, a: &mut [u8], seq: &mut Vec<u8>) {
        const K: u8 = 12;
        const N: usize = 2;
        if t > N {
            if N.is_multiple_of(p) {
                seq.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, a, seq);
            for j in a[t - p] + 1..K {
                a[t] = j;
                db(t + 1, t, a, seq);
            }
        }
    }
    let mut a = [0u8; 3];
    let mut seq = Vec::new();
    db(1, 1, &mut a, &mut seq);
    let first = seq[0];
    seq.push(first);
    seq
}

/// Rotations of the de Bruijn cycle: each is a piece containing every bigram exactly once.
pub fn uniform_corpus(pieces: usize) -> Vec<Vec<u8>> {
    let mut cycle = de_bruijn_12();
    cycle.pop();
    (0..pieces)
        .map(|r| {
            let shift = (r * 37) % cycle.len();
            let mut v: Vec<u8> = cycle[shift..].iter().chain(&cycle[..shift]).copied().collect();
            v.push(v[0]);
            v
        })
        .collect()
}
