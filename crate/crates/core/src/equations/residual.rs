//! Closed-form residual operators. Each function evaluates the left-hand side
//! of one equation at a jet; a solution returns zero.

use super::jet::{ProfileJet, SecondOrderJet};
use crate::error::{domain, invalid, Result};
use crate::scalar::Real;

/// Residual of the radial membrane equation
///
/// ```text
/// u_tt - u_rr - u_r/r + u_tt u_r^2 + u_rr u_t^2 - 2 u_t u_r u_tr
///      + (1/r) u_r u_t^2 - (1/r) u_r^3
/// ```
///
/// at `r > 0`. The axis limit is handled by the evolution module.
pub fn membrane_residual<T: Real>(j: &SecondOrderJet<T>, r: T) -> Result<T> {
    j.validate()?;
    check_radius(r)?;
    let two = T::lit(2.0);
    Ok(j.u_tt - j.u_rr - j.u_r / r + j.u_tt * j.u_r * j.u_r + j.u_rr * j.u_t * j.u_t
        - two * j.u_t * j.u_r * j.u_tr
        + j.u_r * j.u_t * j.u_t / r
        - j.u_r * j.u_r * j.u_r / r)
}

/// Sum of the absolute values of the eight terms of [`membrane_residual`].
///
/// Roundoff in the residual is bounded by a small multiple of machine epsilon
/// times this scale, which grows without bound at the lightcone.
pub fn membrane_residual_scale<T: Real>(j: &SecondOrderJet<T>, r: T) -> Result<T> {
    j.validate()?;
    check_radius(r)?;
    let two = T::lit(2.0);
    let terms = [
        j.u_tt,
        j.u_rr,
        j.u_r / r,
        j.u_tt * j.u_r * j.u_r,
        j.u_rr * j.u_t * j.u_t,
        two * j.u_t * j.u_r * j.u_tr,
        j.u_r * j.u_t * j.u_t / r,
        j.u_r * j.u_r * j.u_r / r,
    ];
    Ok(terms.iter().fold(T::zero(), |acc, t| acc + t.abs()))
}

/// Residual of the planar Born-Infeld string equation in `(t, x)`, with the
/// jet's `r` slots read as `x`:
/// `u_tt - u_xx + u_tt u_x^2 + u_xx u_t^2 - 2 u_t u_x u_tx`.
pub fn born_infeld_residual<T: Real>(j: &SecondOrderJet<T>) -> Result<T> {
    j.validate()?;
    let two = T::lit(2.0);
    Ok(j.u_tt - j.u_rr + j.u_tt * j.u_r * j.u_r + j.u_rr * j.u_t * j.u_t - two * j.u_t * j.u_r * j.u_tr)
}

/// Residual of the self-similar profile equation
///
/// ```text
/// rho (1 - rho^2) phi'' + phi' - phi' phi^2 + 2 rho phi phi'^2
///     - rho phi'' phi^2 + (1 - rho^2) phi'^3
/// ```
pub fn ode_residual<T: Real>(p: &ProfileJet<T>, rho: T) -> Result<T> {
    check_profile_args(p, rho)?;
    let one = T::one();
    let two = T::lit(2.0);
    let (phi, d1, d2) = (p.phi, p.dphi, p.d2phi);
    Ok(rho * (one - rho * rho) * d2 + d1 - d1 * phi * phi + two * rho * phi * d1 * d1 - rho * d2 * phi * phi
        + (one - rho * rho) * d1 * d1 * d1)
}

/// The same residual with the `phi''` terms collected:
/// `rho (1 - rho^2 - phi^2) phi'' + phi' - phi' phi^2 + 2 rho phi phi'^2 + (1 - rho^2) phi'^3`.
pub fn ode_residual_regrouped<T: Real>(p: &ProfileJet<T>, rho: T) -> Result<T> {
    check_profile_args(p, rho)?;
    let (phi, d1, d2) = (p.phi, p.dphi, p.d2phi);
    Ok(rho * (T::one() - rho * rho - phi * phi) * d2 + ode_lower_order(phi, d1, rho))
}

/// Terms of the profile equation that do not involve `phi''`.
pub(crate) fn ode_lower_order<T: Real>(phi: T, d1: T, rho: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    d1 - d1 * phi * phi + two * rho * phi * d1 * d1 + (one - rho * rho) * d1 * d1 * d1
}

/// Full residual of the membrane equation rewritten in similarity coordinates
/// `tau = -log(T - t)`, `rho = r / (T - t)` for the rescaled field
/// `v(tau, rho) = e^tau u`. The jet's `t`/`r` slots hold `tau`/`rho`.
pub fn similarity_residual<T: Real>(j: &SecondOrderJet<T>, rho: T) -> Result<T> {
    j.validate()?;
    check_radius(rho)?;
    let p = j.u_r;
    Ok(j.u_tt * (T::one() + p * p) + similarity_remainder(j, rho))
}

/// Every term of the similarity-frame residual except `v_tautau (1 + v_rho^2)`.
pub(crate) fn similarity_remainder<T: Real>(j: &SecondOrderJet<T>, rho: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let v = j.u;
    let vt = j.u_t;
    let p = j.u_r;
    let vtr = j.u_tr;
    let vrr = j.u_rr;
    let b = vt - v;
    -vt - (one - rho * rho) * vrr - p / rho + two * rho * vtr + p * p * (vt - two * v) + vrr * b * b
        - two * p * vtr * b
        + p * b * b / rho
        + (rho * rho - one) * p * p * p / rho
}

/// Hyperbolicity monitor `h = 1 - u_t^2 + u_r^2`, the radicand of the action
/// density. The characteristic discriminant of the membrane equation is `4h`,
/// so `h > 0` exactly where the equation is strictly hyperbolic.
pub fn hyperbolicity_monitor<T: Real>(j: &SecondOrderJet<T>) -> Result<T> {
    j.validate()?;
    Ok(T::one() - j.u_t * j.u_t + j.u_r * j.u_r)
}

/// The same monitor evaluated from a similarity-frame jet. The physical
/// time derivative is `u_t = v_tau - v + rho v_rho` and `u_r = v_rho`.
pub fn similarity_hyperbolicity<T: Real>(j: &SecondOrderJet<T>, rho: T) -> T {
    let ut = j.u_t - j.u + rho * j.u_r;
    T::one() - ut * ut + j.u_r * j.u_r
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if !r.is_finite() {
        return Err(invalid(format!("non-finite radius {r}")));
    }
    if r <= T::zero() {
        return Err(domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn check_profile_args<T: Real>(p: &ProfileJet<T>, rho: T) -> Result<()> {
    if ![p.phi, p.dphi, p.d2phi, rho].iter().all(|v| v.is_finite()) {
        return Err(invalid("non-finite profile jet or rho"));
    }
    if rho < T::zero() || rho > T::one() {
        return Err(domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(u: f64, ut: f64, ur: f64, utt: f64, utr: f64, urr: f64) -> SecondOrderJet<f64> {
        SecondOrderJet::new(u, ut, ur, utt, utr, urr).unwrap()
    }

    #[test]
    fn membrane_zero_and_quadratic() {
        let z = SecondOrderJet::zero();
        for r in [0.1, 0.5, 3.0] {
            assert_eq!(membrane_residual(&z, r).unwrap(), 0.0);
        }
        // u = r^2 at r = 0.5: -u_rr - u_r/r - u_r^3/r = -2 - 2 - 2
        let j = jet(0.25, 0.0, 1.0, 0.0, 0.0, 2.0);
        assert!((membrane_residual(&j, 0.5).unwrap() + 6.0).abs() < 1e-15);
    }

    #[test]
    fn membrane_refuses_axis_and_nan() {
        let z = SecondOrderJet::<f64>::zero();
        assert!(matches!(membrane_residual(&z, 0.0), Err(crate::Error::Domain(_))));
        let bad = SecondOrderJet { u_t: f64::NAN, ..z };
        assert!(matches!(membrane_residual(&bad, 1.0), Err(crate::Error::InvalidInput(_))));
    }

    #[test]
    fn born_infeld_examples() {
        assert_eq!(born_infeld_residual(&SecondOrderJet::<f64>::zero()).unwrap(), 0.0);
        assert_eq!(born_infeld_residual(&jet(1.0, 0.0, 1.0, 0.0, 0.0, 0.0)).unwrap(), 0.0);
        // u = t x at (1, 1)
        assert_eq!(born_infeld_residual(&jet(1.0, 1.0, 1.0, 0.0, 1.0, 0.0)).unwrap(), -2.0);
    }

    #[test]
    fn born_infeld_travelling_waves_vanish() {
        // u = f(x - t) with f = sin: u_t = -f', u_x = f', u_tt = u_xx = f'', u_tx = -f''
        for s in [0.0, 0.3, 1.7, -2.2] {
            let (f1, f2) = (f64::cos(s), -f64::sin(s));
            let j = jet(f64::sin(s), -f1, f1, f2, -f2, f2);
            assert!(born_infeld_residual(&j).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn ode_examples() {
        for rho in [0.0f64, 0.2, 0.7, 1.0] {
            let c = ProfileJet::new(0.37, 0.0, 0.0).unwrap();
            assert_eq!(ode_residual(&c, rho).unwrap(), 0.0);
            let lin = ProfileJet::new(rho, 1.0, 0.0).unwrap();
            assert!((ode_residual(&lin, rho).unwrap() - 2.0).abs() < 1e-15);
        }
        assert!(matches!(
            ode_residual(&ProfileJet::new(0.0, 0.0, 0.0).unwrap(), 1.5),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn similarity_linear_field() {
        // v = rho at rho = 0.5 gives -2 / rho
        let j = jet(0.5, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert!((similarity_residual(&j, 0.5).unwrap() + 4.0).abs() < 1e-14);
        assert_eq!(similarity_residual(&SecondOrderJet::<f64>::zero(), 0.3).unwrap(), 0.0);
    }

    #[test]
    fn monitor_examples() {
        assert_eq!(hyperbolicity_monitor(&SecondOrderJet::<f64>::zero()).unwrap(), 1.0);
        // u = t / 2
        let j = jet(0.0, 0.5, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(hyperbolicity_monitor(&j).unwrap(), 0.75);
    }

    #[test]
    fn membrane_residual_is_odd() {
        let j = jet(0.3, -0.2, 0.7, 1.1, -0.4, 2.5);
        let a = membrane_residual(&j, 0.8).unwrap();
        let b = membrane_residual(&(-j), 0.8).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn works_in_single_precision() {
        let j = SecondOrderJet::new(0.25f32, 0.0, 1.0, 0.0, 0.0, 2.0).unwrap();
        assert!((membrane_residual(&j, 0.5f32).unwrap() + 6.0).abs() < 1e-6);
    }
}
