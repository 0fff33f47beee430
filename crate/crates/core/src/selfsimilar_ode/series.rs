//! Even power series for profiles that are regular at the axis.
//!
//! Writing `phi = sum c_{2k} rho^{2k}` and collecting powers of `rho` in the
//! profile residual, the coefficient of `c_{2k}` at order `rho^{2k-1}` is
//! `4 k^2 (1 - a^2)` with `a = phi(0)`. Away from `a = +-1` each coefficient is
//! therefore fixed one order earlier than it first appears; the order-`rho`
//! balance forces `phi''(0) = 0` and every profile is constant. At `a = +-1`
//! those leading terms vanish, `c_{2k}` is fixed at order `rho^{2k+1}`
//! instead, and the order-`rho^3` balance `c_2 (1 - 4 c_2^2) = 0` restricts the
//! curvature to `phi''(0) in {-1, 0, 1}`.

use crate::equations::ProfileJet;
use crate::error::{validation, Error, Result};
use crate::scalar::Real;

/// Largest supported truncation order of the seed series.
pub const MAX_SEED_ORDER: usize = 24;

/// Outcome of the order-`rho` balance at the axis.
#[derive(Debug, Clone, PartialEq)]
pub enum LeadingBalance<T> {
    /// `phi''(0)` is forced to the given value.
    Forced(T),
    /// `phi''(0)` is not fixed by the order-`rho` balance. Regular series
    /// exist only for the listed curvatures, which the order-`rho^3`
    /// balance selects.
    Free { regular_curvatures: [T; 3] },
}

impl<T: Real> LeadingBalance<T> {
    pub fn is_free(&self) -> bool {
        matches!(self, LeadingBalance::Free { .. })
    }

    /// Whether `b = phi''(0)` admits a regular even series.
    pub fn admits(&self, b: T) -> bool {
        let tol = T::lit(1e-12);
        match self {
            LeadingBalance::Forced(v) => (b - *v).abs() <= tol,
            LeadingBalance::Free { regular_curvatures } => {
                regular_curvatures.iter().any(|c| (b - *c).abs() <= tol)
            }
        }
    }
}

fn is_degenerate<T: Real>(a: T) -> bool {
    (a * a - T::one()).abs() <= T::lit(1e-12)
}

/// Order-`rho` balance `b (2 - 2 a^2) = 0` for the seed value `a = phi(0)`.
pub fn leading_balance<T: Real>(a: T) -> LeadingBalance<T> {
    if is_degenerate(a) {
        LeadingBalance::Free { regular_curvatures: [-T::one(), T::zero(), T::one()] }
    } else {
        LeadingBalance::Forced(T::zero())
    }
}

/// Truncated even Taylor series used to start the profile integration away
/// from the singular point `rho = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeed<T> {
    a: T,
    b: T,
    order: usize,
    start_rho: T,
    /// Dense coefficients `c_0 ..= c_{order + 2}`; odd entries are zero and
    /// the last even entry only feeds the truncation estimate.
    coeffs: Vec<T>,
}

impl<T: Real> TaylorSeed<T> {
    /// Seed with `phi(0) = a`, `phi''(0) = b`, validated against the
    /// regularity conditions at the axis.
    pub fn new(a: T, b: T, order: usize, start_rho: T) -> Result<Self> {
        let balance = leading_balance(a);
        if !b.is_finite() || !balance.admits(b) {
            let why = match balance {
                LeadingBalance::Forced(_) => format!("phi(0) = {a} forces phi''(0) = 0, got {b}"),
                LeadingBalance::Free { .. } => {
                    format!("phi(0) = {a} admits a regular series only for phi''(0) in {{-1, 0, 1}}, got {b}")
                }
            };
            return Err(validation(why));
        }
        Self::unchecked(a, b, order, start_rho)
    }

    /// Seed that skips the axis regularity conditions. Its series satisfies
    /// the profile equation only up to the violated balance; meant for
    /// negative controls.
    pub fn unchecked(a: T, b: T, order: usize, start_rho: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && start_rho.is_finite()) {
            return Err(Error::InvalidInput("non-finite seed parameters".into()));
        }
        if order < 2 || !order.is_multiple_of(2) || order > MAX_SEED_ORDER {
            return Err(validation(format!(
                "seed order must be even and within 2..={MAX_SEED_ORDER}, got {order}"
            )));
        }
        if !(start_rho > T::zero() && start_rho <= T::lit(0.1)) {
            return Err(validation(format!("start_rho must lie in (0, 0.1], got {start_rho}")));
        }
        let a = if is_degenerate(a) { a.signum() } else { a };
        let coeffs = series_coefficients(a, b, order + 2)?;
        Ok(Self { a, b, order, start_rho, coeffs })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn start_rho(&self) -> T {
        self.start_rho
    }

    /// Whether the seed meets the regularity conditions at the axis.
    pub fn is_regular(&self) -> bool {
        leading_balance(self.a).admits(self.b)
    }

    /// Taylor coefficient of `rho^k` for `k <= order`.
    pub fn coefficient(&self, k: usize) -> T {
        if k <= self.order {
            self.coeffs[k]
        } else {
            T::zero()
        }
    }

    /// Evaluates the truncated series and its first two derivatives without
    /// any range or regularity check.
    pub fn series_jet(&self, rho: T) -> ProfileJet<T> {
        let (mut p, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
        for k in (0..=self.order).rev() {
            let c = self.coeffs[k];
            p = p * rho + c;
            if k >= 1 {
                d1 = d1 * rho + T::from_index(k) * c;
            }
            if k >= 2 {
                d2 = d2 * rho + T::from_index(k * (k - 1)) * c;
            }
        }
        ProfileJet { phi: p, dphi: d1, d2phi: d2 }
    }

    /// Magnitude of the first omitted term, `|c_{order+2}| rho^{order+2}`.
    pub fn truncation_estimate(&self, rho: T) -> T {
        self.coeffs[self.order + 2].abs() * rho.abs().powi(self.order as i32 + 2)
    }
}

/// Evaluates the seed series at `0 <= rho <= start_rho`.
pub fn taylor_eval<T: Real>(seed: &TaylorSeed<T>, rho: T) -> Result<ProfileJet<T>> {
    if !seed.is_regular() {
        return Err(validation(format!("seed (a = {}, b = {}) violates the axis balance", seed.a, seed.b)));
    }
    if !rho.is_finite() {
        return Err(Error::InvalidInput("non-finite rho".into()));
    }
    let slack = T::lit(8.0) * T::epsilon() * seed.start_rho;
    if rho < T::zero() || rho > seed.start_rho + slack {
        return Err(Error::Domain(format!("Taylor seed is evaluated on [0, {}], got {rho}", seed.start_rho)));
    }
    Ok(seed.series_jet(rho))
}

/// Solves for the even coefficients `c_0 ..= c_n` given `c_0 = a`,
/// `c_2 = b / 2`. Each new coefficient enters its determining order
/// linearly, so it follows from two trial evaluations of that order.
fn series_coefficients<T: Real>(a: T, b: T, n: usize) -> Result<Vec<T>> {
    let degenerate = is_degenerate(a);
    let mut c = vec![T::zero(); n + 1];
    c[0] = a;
    c[2] = b / T::lit(2.0);
    for k in 2..=n / 2 {
        let m = if degenerate { 2 * k + 1 } else { 2 * k - 1 };
        c[2 * k] = T::zero();
        let r0 = residual_coefficient(&c, m);
        c[2 * k] = T::one();
        let r1 = residual_coefficient(&c, m);
        let slope = r1 - r0;
        let scale = T::one() + r0.abs() + r1.abs();
        c[2 * k] = if slope.abs() > T::lit(1e-13) * scale {
            -r0 / slope
        } else if r0.abs() <= T::lit(1e-13) * scale {
            // Undetermined at this order; the zero continuation is the
            // one shared by the constant profile.
            T::zero()
        } else {
            return Err(validation(format!(
                "no regular series through order {}: rho^{m} balance cannot be met",
                2 * k
            )));
        };
    }
    Ok(c)
}

/// Coefficient of `rho^m` in the profile residual of the polynomial `c`.
fn residual_coefficient<T: Real>(c: &[T], m: usize) -> T {
    let len = m + 1;
    let at = |v: &[T], k: usize| if k < v.len() { v[k] } else { T::zero() };
    let phi: Vec<T> = (0..len).map(|k| at(c, k)).collect();
    let d1: Vec<T> = (0..len).map(|k| T::from_index(k + 1) * at(c, k + 1)).collect();
    let d2: Vec<T> = (0..len).map(|k| T::from_index((k + 2) * (k + 1)) * at(c, k + 2)).collect();
    let phi2 = mul(&phi, &phi, len);
    let d1sq = mul(&d1, &d1, len);
    let d1cube = mul(&d1sq, &d1, len);
    let d1phi2 = mul(&d1, &phi2, len);
    let phid1sq = mul(&phi, &d1sq, len);
    let d2phi2 = mul(&d2, &phi2, len);
    let shifted = |v: &[T], s: usize| if m >= s { at(v, m - s) } else { T::zero() };
    let two = T::lit(2.0);
    // rho d2 - rho^3 d2 + d1 - d1 phi^2 + 2 rho phi d1^2 - rho d2 phi^2 + d1^3 - rho^2 d1^3
    shifted(&d2, 1) - shifted(&d2, 3) + shifted(&d1, 0) - shifted(&d1phi2, 0) + two * shifted(&phid1sq, 1)
        - shifted(&d2phi2, 1)
        + shifted(&d1cube, 0)
        - shifted(&d1cube, 2)
}

fn mul<T: Real>(x: &[T], y: &[T], len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, &xi) in x.iter().enumerate().take(len) {
        if xi == T::zero() {
            continue;
        }
        for (j, &yj) in y.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + xi * yj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::ode_residual;

    #[test]
    fn leading_balance_examples() {
        assert_eq!(leading_balance(0.5), LeadingBalance::Forced(0.0));
        assert!(leading_balance(1.0f64).is_free());
        assert!(leading_balance(-1.0f64).is_free());
        assert!(leading_balance(1.0f64).admits(-1.0));
        assert!(!leading_balance(1.0f64).admits(-0.5));
    }

    #[test]
    fn explicit_profile_series() {
        let s = TaylorSeed::new(1.0f64, -1.0, 4, 0.1).unwrap();
        let j = taylor_eval(&s, 0.0).unwrap();
        assert_eq!((j.phi, j.dphi), (1.0, 0.0));
        let j = taylor_eval(&s, 0.1).unwrap();
        assert!((j.phi - 0.9949875).abs() < 1e-15);
        assert_eq!(s.coefficient(4), -0.125);
        // sqrt(1 - rho^2) = 1 - rho^2/2 - rho^4/8 - rho^6/16 - 5 rho^8/128
        let s = TaylorSeed::new(1.0f64, -1.0, 8, 0.05).unwrap();
        for (k, c) in [(6, -1.0 / 16.0), (8, -5.0 / 128.0)] {
            assert!((s.coefficient(k) - c).abs() < 1e-14, "c_{k} = {}", s.coefficient(k));
        }
    }

    #[test]
    fn hyperbolic_branch_series() {
        // sqrt(1 + rho^2) = 1 + rho^2/2 - rho^4/8 + rho^6/16
        let s = TaylorSeed::new(1.0f64, 1.0, 6, 0.05).unwrap();
        assert!((s.coefficient(4) + 0.125).abs() < 1e-14);
        assert!((s.coefficient(6) - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn constant_seeds() {
        for (a, order) in [(0.5, 4), (-2.0, 8), (1.0, 6), (0.0, 2)] {
            let s = TaylorSeed::new(a, 0.0, order, 0.05).unwrap();
            let j = taylor_eval(&s, 0.04).unwrap();
            assert_eq!((j.phi, j.dphi, j.d2phi), (a, 0.0, 0.0));
        }
    }

    #[test]
    fn series_residual_is_high_order() {
        for (a, b) in [(1.0f64, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            let s = TaylorSeed::new(a, b, 10, 0.1).unwrap();
            let r = ode_residual(&s.series_jet(0.05), 0.05).unwrap();
            assert!(r.abs() < 1e-14, "({a}, {b}): {r}");
        }
    }

    #[test]
    fn rejects_invalid_seeds() {
        assert!(TaylorSeed::new(0.5, 0.3, 4, 0.05).is_err());
        assert!(TaylorSeed::new(1.0, -0.5, 4, 0.05).is_err());
        assert!(TaylorSeed::new(1.0, -1.0, 3, 0.05).is_err());
        assert!(TaylorSeed::new(1.0, -1.0, 4, 0.2).is_err());
        assert!(TaylorSeed::new(1.0, -1.0, 4, 0.0).is_err());
        let bad = TaylorSeed::unchecked(0.5, 0.3, 4, 0.05).unwrap();
        assert!(taylor_eval(&bad, 0.01).is_err());
        let s = TaylorSeed::new(1.0, -1.0, 4, 0.05).unwrap();
        assert!(taylor_eval(&s, 0.06).is_err());
    }

    #[test]
    fn truncation_estimate_bounds_error() {
        let s = TaylorSeed::new(1.0f64, -1.0, 4, 0.1).unwrap();
        let rho = 0.1f64;
        let err = (s.series_jet(rho).phi - (1.0 - rho * rho).sqrt()).abs();
        let est = s.truncation_estimate(rho);
        assert!(err <= 1.5 * est && err >= 0.5 * est, "{err} vs {est}");
    }
}
