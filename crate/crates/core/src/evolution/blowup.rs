//! Blow-up time estimation from the growth of the axis curvature.
//!
//! Near a self-similar blow-up `|u_rr(t, 0)| ~ C / (T - t)`, so the
//! reciprocal `1 / |u_rr|` is linear in `t` and vanishes at `T`.

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::scalar::Real;

/// Minimum number of samples accepted by [`detect_blowup`].
pub const MIN_BLOWUP_SAMPLES: usize = 8;

/// Fitted blow-up law `|u_rr(t, 0)| = amplitude_c / (t_est - t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupFit<T> {
    pub t_est: T,
    pub amplitude_c: T,
    /// Root-mean-square residual of the reciprocal fit.
    pub fit_residual: T,
    /// Time range of the samples used.
    pub window: (T, T),
    pub samples: usize,
}

/// Fits the blow-up law to an axis-curvature series over its last decade of
/// growth (samples with `|u_rr|` at least a tenth of the final value), or
/// the last [`MIN_BLOWUP_SAMPLES`] samples if the decade holds fewer.
pub fn detect_blowup<T: Real>(times: &[T], axis_urr: &[T]) -> Result<BlowupFit<T>> {
    let n = times.len();
    if n != axis_urr.len() {
        return Err(Error::FitRejected(format!("{n} times but {} curvatures", axis_urr.len())));
    }
    if n < MIN_BLOWUP_SAMPLES {
        return Err(Error::FitRejected(format!("need at least {MIN_BLOWUP_SAMPLES} samples, got {n}")));
    }
    if !times.iter().chain(axis_urr).all(|v| v.is_finite()) {
        return Err(Error::FitRejected("non-finite sample".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::FitRejected("times are not strictly increasing".into()));
    }
    let mag: Vec<T> = axis_urr.iter().map(|v| v.abs()).collect();
    if mag.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::FitRejected("axis curvature magnitude is not strictly increasing".into()));
    }
    let cutoff = mag[n - 1] / T::lit(10.0);
    let decade_start = mag.iter().position(|&m| m >= cutoff).unwrap_or(0);
    let start = decade_start.min(n - MIN_BLOWUP_SAMPLES);
    let ts = &times[start..];
    let recip: Vec<T> = mag[start..].iter().map(|&m| T::one() / m).collect();
    let line = linear_fit(ts, &recip)?;
    if line.slope >= T::zero() {
        return Err(Error::FitRejected("reciprocal curvature is not decreasing".into()));
    }
    let t_est = -line.intercept / line.slope;
    let t_hi = ts[ts.len() - 1];
    if !(t_est.is_finite() && t_est > t_hi) {
        return Err(Error::FitRejected(format!(
            "estimated blow-up time {t_est} does not follow the last sample {t_hi}"
        )));
    }
    Ok(BlowupFit {
        t_est,
        amplitude_c: -T::one() / line.slope,
        fit_residual: line.rms_residual,
        window: (ts[0], t_hi),
        samples: ts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(t_blow: f64) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = (0..21).map(|k| 0.5 + 0.02 * k as f64).collect();
        let v = t.iter().map(|&t| -1.0 / (t_blow - t)).collect();
        (t, v)
    }

    #[test]
    fn exact_law() {
        let (t, v) = series(1.0);
        let fit = detect_blowup(&t, &v).unwrap();
        assert!((fit.t_est - 1.0).abs() < 1e-12);
        assert!((fit.amplitude_c - 1.0).abs() < 1e-12);
        assert!(fit.window.0 < fit.window.1 && fit.window.1 < fit.t_est);
    }

    #[test]
    fn rejects_flat_and_short_series() {
        let t: Vec<f64> = (0..10).map(|k| k as f64).collect();
        assert!(matches!(detect_blowup(&t, &[2.0; 10]), Err(Error::FitRejected(_))));
        let (t, v) = series(1.0);
        assert!(detect_blowup(&t[..5], &v[..5]).is_err());
    }
}
