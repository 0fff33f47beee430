//! Linearization of the similarity-frame equation about a static profile,
//! and the closed-form solution of the reduced linear equation.

use crate::equations::{explicit_profile, Branch, ProfileJet};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::reduced_roots;

/// Coefficients of `v_tautau, v_tau, v_taurho, v_rhorho, v_rho, v` in the
/// part of the similarity-frame residual that is linear in the perturbation
/// `v = v_tilde - phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedCoefficients<T> {
    pub c_tt: T,
    pub c_t: T,
    pub c_trho: T,
    pub c_rhorho: T,
    pub c_rho: T,
    pub c_0: T,
}

impl<T: Real> LinearizedCoefficients<T> {
    pub fn as_array(&self) -> [T; 6] {
        [self.c_tt, self.c_t, self.c_trho, self.c_rhorho, self.c_rho, self.c_0]
    }

    /// Applies the linear operator to a perturbation jet whose slots hold
    /// `(v, v_tau, v_rho, v_tautau, v_taurho, v_rhorho)`.
    pub fn apply(&self, v: [T; 6]) -> T {
        self.c_0 * v[0]
            + self.c_t * v[1]
            + self.c_rho * v[2]
            + self.c_tt * v[3]
            + self.c_trho * v[4]
            + self.c_rhorho * v[5]
    }
}

/// Partial derivatives of the similarity-frame residual at the static jet
/// of `p`, for `0 < rho`:
///
/// ```text
/// c_tt     = 1 + phi'^2
/// c_t      = -1 + phi'^2 - 2 phi phi'' - 2 phi phi' / rho
/// c_trho   = 2 (rho + phi phi')
/// c_rhorho = -(1 - rho^2 - phi^2)
/// c_rho    = -(1 + 4 rho phi phi' - 3 (rho^2 - 1) phi'^2 - phi^2) / rho
/// c_0      = -2 phi'^2 + 2 phi phi'' + 2 phi phi' / rho
/// ```
pub fn linearized_coefficients_at<T: Real>(p: &ProfileJet<T>, rho: T) -> Result<LinearizedCoefficients<T>> {
    if !(rho.is_finite() && rho > T::zero()) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let (f, d1, d2) = (p.phi, p.dphi, p.d2phi);
    let (one, two, three, four) = (T::one(), T::lit(2.0), T::lit(3.0), T::lit(4.0));
    Ok(LinearizedCoefficients {
        c_tt: one + d1 * d1,
        c_t: -one + d1 * d1 - two * f * d2 - two * f * d1 / rho,
        c_trho: two * (rho + f * d1),
        c_rhorho: -(one - rho * rho - f * f),
        c_rho: -(one + four * rho * f * d1 - three * (rho * rho - one) * d1 * d1 - f * f) / rho,
        c_0: -two * d1 * d1 + two * f * d2 + two * f * d1 / rho,
    })
}

/// Linearized coefficients about the explicit profile of `branch`.
///
/// On either branch `c_trho` and `c_rhorho` vanish, and the remaining
/// coefficients are `(1, 3, -4) / (1 - rho^2)`, so the linear equation is
/// `(v_tautau + 3 v_tau - 4 v) / (1 - rho^2) = 0`.
pub fn linearized_coefficients<T: Real>(branch: Branch, rho: T) -> Result<LinearizedCoefficients<T>> {
    if !(rho.is_finite() && rho > T::zero() && rho < T::one()) {
        return Err(Error::Domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    let jet = explicit_profile(branch, rho)?
        .jet()
        .ok_or_else(|| Error::Domain(format!("profile derivatives overflow at rho = {rho}")))?;
    linearized_coefficients_at(&jet, rho)
}

/// Solution of `v_tautau + 3 v_tau - 4 v = 0` with `v(0) = v0`,
/// `v_tau(0) = v0_tau`: `c1 e^{nu1 tau} + c2 e^{nu2 tau}` with
/// `(nu1, nu2) = (1, -4)`.
pub fn reduced_linear_solution<T: Real>(v0: T, v0_tau: T, tau: T) -> T {
    let (nu1, nu2) = reduced_roots::<T>();
    let c1 = (v0_tau - nu2 * v0) / (nu1 - nu2);
    let c2 = (nu1 * v0 - v0_tau) / (nu1 - nu2);
    c1 * (nu1 * tau).exp() + c2 * (nu2 * tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        for branch in Branch::BOTH {
            let c = linearized_coefficients(branch, 0.5f64).unwrap();
            assert!(c.c_trho.abs() < 1e-12 && c.c_rhorho.abs() < 1e-12);
            assert!((c.c_tt - 4.0 / 3.0).abs() < 1e-12);
            assert!((c.c_t - 4.0).abs() < 1e-12 && (c.c_0 + 16.0 / 3.0).abs() < 1e-12);
            assert!(c.c_rho.abs() < 1e-12);
        }
        let near_axis = linearized_coefficients(Branch::Plus, 1e-9f64).unwrap();
        assert!((near_axis.c_tt - 1.0).abs() < 1e-12);
        assert!(linearized_coefficients(Branch::Plus, 1.0f64).is_err());
        assert!(linearized_coefficients(Branch::Plus, 0.0f64).is_err());
    }

    #[test]
    fn reduced_solution_modes() {
        assert_eq!(reduced_linear_solution(0.0, 0.0, 3.0), 0.0);
        for tau in [0.0f64, 0.5, 2.0] {
            assert!((reduced_linear_solution(1.0, 1.0, tau) - tau.exp()).abs() < 1e-12 * tau.exp());
            assert!((reduced_linear_solution(1.0, -4.0, tau) - (-4.0 * tau).exp()).abs() < 1e-14);
        }
    }
}
