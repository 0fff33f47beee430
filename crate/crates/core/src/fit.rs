//! Ordinary least squares for a straight line, the workhorse behind the
//! blow-up time and growth-rate fits.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Standard error of the slope (zero for exact data).
    pub slope_std_error: T,
    /// Root-mean-square of the residuals `y - (intercept + slope x)`.
    pub rms_residual: T,
    pub samples: usize,
}

impl<T: Real> LinearFit<T> {
    pub fn predict(&self, x: T) -> T {
        self.intercept + self.slope * x
    }
}

/// Fits `y = intercept + slope x` using centred sums.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::FitRejected(format!("{n} abscissae but {} ordinates", ys.len())));
    }
    if n < 2 {
        return Err(Error::FitRejected(format!("need at least two points, got {n}")));
    }
    if !xs.iter().chain(ys).all(|v| v.is_finite()) {
        return Err(Error::FitRejected("non-finite sample".into()));
    }
    let nt = T::from_index(n);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / nt;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / nt;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    if sxx <= T::zero() {
        return Err(Error::FitRejected("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = xs.iter().zip(ys).fold(T::zero(), |a, (&x, &y)| {
        let r = y - (intercept + slope * x);
        a + r * r
    });
    let slope_std_error = if n > 2 { (sse / (T::from_index(n - 2) * sxx)).sqrt() } else { T::zero() };
    Ok(LinearFit { slope, intercept, slope_std_error, rms_residual: (sse / nt).sqrt(), samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0f64, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.rms_residual < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 2.0]).is_err());
        assert!(linear_fit(&[1.0], &[0.0]).is_err());
        assert!(linear_fit(&[0.0, f64::NAN], &[0.0, 1.0]).is_err());
    }
}
