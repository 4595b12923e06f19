use crate::scalar::Real;

use super::{mean, StatsError};

/// `y ≈ c0 + c1·x + c2·x²`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFit<T = f64> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
    /// Centered coefficient of determination.
    pub r_squared: T,
    pub n: usize,
}

impl<T: Real> QuadraticFit<T> {
    pub fn predict(&self, x: T) -> T {
        self.c0 + x * (self.c1 + x * self.c2)
    }

    /// A negative leading coefficient is the inverted-U shape.
    pub fn is_inverted_u(&self) -> bool {
        self.c2 < T::zero()
    }
}

/// Least squares by Householder QR on the Vandermonde matrix of the centered,
/// scaled abscissae, mapped back to the original polynomial basis.
pub fn quadratic_fit<T: Real>(x: &[T], y: &[T]) -> Result<QuadraticFit<T>, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { x: x.len(), y: y.len() });
    }
    let n = x.len();
    if n < 4 {
        return Err(StatsError::TooFewPoints { needed: 4, got: n });
    }
    let shift = mean(x);
    let scale = x.iter().map(|&v| (v - shift).abs()).fold(T::zero(), T::max);
    if scale.is_zero() {
        return Err(StatsError::SingularSystem);
    }

    // Column-major n×3 design matrix in u = (x − shift)/scale.
    let mut a: Vec<[T; 3]> = x
        .iter()
        .map(|&v| {
            let u = (v - shift) / scale;
            [T::one(), u, u * u]
        })
        .collect();
    let mut rhs: Vec<T> = y.to_vec();

    let mut r = [[T::zero(); 3]; 3];
    for k in 0..3 {
        let norm = a[k..].iter().map(|row| row[k] * row[k]).sum::<T>().sqrt();
        if norm <= T::epsilon() * T::of_usize(n) * T::of(16.0) {
            return Err(StatsError::SingularSystem);
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        // v = a[k.., k] − alpha e_k
        let mut v: Vec<T> = a[k..].iter().map(|row| row[k]).collect();
        v[0] = v[0] - alpha;
        let vnorm2: T = v.iter().map(|&t| t * t).sum();
        if !vnorm2.is_zero() {
            for j in k..3 {
                let dot: T = v.iter().zip(&a[k..]).map(|(&vi, row)| vi * row[j]).sum();
                let f = T::of(2.0) * dot / vnorm2;
                for (vi, row) in v.iter().zip(a[k..].iter_mut()) {
                    row[j] = row[j] - f * *vi;
                }
            }
            let dot: T = v.iter().zip(&rhs[k..]).map(|(&vi, &b)| vi * b).sum();
            let f = T::of(2.0) * dot / vnorm2;
            for (vi, b) in v.iter().zip(rhs[k..].iter_mut()) {
                *b = *b - f * *vi;
            }
        }
        for j in k..3 {
            r[k][j] = a[k][j];
        }
    }
    let diag_max = (0..3).map(|k| r[k][k].abs()).fold(T::zero(), T::max);
    if (0..3).any(|k| r[k][k].abs() <= diag_max * T::epsilon() * T::of(1e3)) {
        return Err(StatsError::SingularSystem);
    }

    let mut d = [T::zero(); 3];
    for k in (0..3).rev() {
        let mut s = rhs[k];
        for j in k + 1..3 {
            s = s - r[k][j] * d[j];
        }
        d[k] = s / r[k][k];
    }

    // p(x) = d0 + d1 u + d2 u², u = (x − m)/s
    let (m, s) = (shift, scale);
    let c2 = d[2] / (s * s);
    let c1 = d[1] / s - T::of(2.0) * d[2] * m / (s * s);
    let c0 = d[0] - d[1] * m / s + d[2] * m * m / (s * s);

    let y_bar = mean(y);
    let sst: T = y.iter().map(|&v| (v - y_bar) * (v - y_bar)).sum();
    let ssr: T = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let u = (xi - m) / s;
            let e = yi - (d[0] + u * (d[1] + u * d[2]));
            e * e
        })
        .sum();
    let r_squared = if sst.is_zero() { T::one() } else { T::one() - ssr / sst };
    Ok(QuadraticFit { c0, c1, c2, r_squared, n })
}
