//! The two explicit self-similar solutions `u = ±sqrt((T - t)^2 - r^2)` and
//! their profiles `phi(rho) = ±sqrt(1 - rho^2)`.

use super::jet::{Branch, Evaluation, ProfileJet, SecondOrderJet};
use crate::error::{domain, invalid, Result};
use crate::scalar::Real;

/// Profile value and derivatives of the `branch` solution at `rho in [0, 1]`.
///
/// At `rho = 1` the derivatives diverge and only the value is returned.
pub fn explicit_profile<T: Real>(branch: Branch, rho: T) -> Result<Evaluation<ProfileJet<T>, T>> {
    if !rho.is_finite() {
        return Err(invalid("non-finite rho"));
    }
    if rho < T::zero() || rho > T::one() {
        return Err(domain(format!("explicit profile defined for rho in [0, 1], got {rho}")));
    }
    let sign: T = branch.sign();
    let q2 = T::one() - rho * rho;
    if q2 <= T::zero() {
        return Ok(Evaluation::Boundary { value: T::zero() });
    }
    let q = q2.sqrt();
    let jet = ProfileJet::new(sign * q, -sign * rho / q, -sign / (q2 * q))
        .map_err(|_| domain(format!("derivative overflow at rho = {rho}")))?;
    Ok(Evaluation::Interior(jet))
}

/// Explicit solution `branch * sqrt((T - t)^2 - r^2)` on the backward
/// lightcone of the blow-up point `(T, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitSolution<T> {
    branch: Branch,
    blowup_time: T,
}

impl<T: Real> ExplicitSolution<T> {
    pub fn new(branch: Branch, blowup_time: T) -> Result<Self> {
        if !(blowup_time.is_finite() && blowup_time > T::zero()) {
            return Err(invalid(format!("blow-up time must be positive, got {blowup_time}")));
        }
        Ok(Self { branch, blowup_time })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn blowup_time(&self) -> T {
        self.blowup_time
    }

    /// Exact jet at `(t, r)`. Points on the cone `r = T - t` return the value
    /// (zero) with a derivative-overflow flag.
    pub fn jet(&self, t: T, r: T) -> Result<Evaluation<SecondOrderJet<T>, T>> {
        if !(t.is_finite() && r.is_finite()) {
            return Err(invalid("non-finite evaluation point"));
        }
        let s = self.blowup_time - t;
        if s <= T::zero() {
            return Err(domain(format!("t = {t} is not before the blow-up time")));
        }
        if r < T::zero() {
            return Err(domain(format!("negative radius {r}")));
        }
        let slack = T::lit(4.0) * T::epsilon() * s;
        if r > s + slack {
            return Err(domain(format!("(t, r) = ({t}, {r}) lies outside the backward lightcone")));
        }
        let q2 = (s - r) * (s + r);
        if q2 <= T::zero() {
            return Ok(Evaluation::Boundary { value: T::zero() });
        }
        let sign: T = self.branch.sign();
        let q = q2.sqrt();
        let q3 = q2 * q;
        let jet = SecondOrderJet::new(
            sign * q,
            -sign * s / q,
            -sign * r / q,
            -sign * r * r / q3,
            -sign * s * r / q3,
            -sign * s * s / q3,
        )
        .map_err(|_| domain(format!("derivative overflow at (t, r) = ({t}, {r})")))?;
        Ok(Evaluation::Interior(jet))
    }

    /// Solution value; zero on the cone itself.
    pub fn value(&self, t: T, r: T) -> Result<T> {
        Ok(self.jet(t, r)?.value())
    }

    /// `d^2 u / dr^2` on the axis, `-branch / (T - t)`.
    ///
    /// The magnitude `1 / (T - t)` diverges as `t -> T`; the `+` branch is
    /// concave on the axis so its curvature is negative.
    pub fn axis_second_derivative(&self, t: T) -> Result<T> {
        if !t.is_finite() {
            return Err(invalid("non-finite time"));
        }
        let s = self.blowup_time - t;
        if s <= T::zero() {
            return Err(domain(format!("axis curvature requires t < T, got t = {t}")));
        }
        Ok(-self.branch.sign::<T>() / s)
    }
}

/// Convenience wrapper matching the free-function form of
/// [`ExplicitSolution::jet`].
pub fn explicit_solution_jet<T: Real>(
    s: &ExplicitSolution<T>,
    t: T,
    r: T,
) -> Result<Evaluation<SecondOrderJet<T>, T>> {
    s.jet(t, r)
}

pub fn axis_second_derivative<T: Real>(s: &ExplicitSolution<T>, t: T) -> Result<T> {
    s.axis_second_derivative(t)
}

/// A point `(t, r)` of the half plane `r >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightconePoint<T> {
    pub t: T,
    pub r: T,
}

impl<T: Real> LightconePoint<T> {
    pub fn new(t: T, r: T) -> Result<Self> {
        if !(t.is_finite() && r.is_finite()) {
            return Err(invalid("non-finite lightcone point"));
        }
        if r < T::zero() {
            return Err(domain(format!("negative radius {r}")));
        }
        Ok(Self { t, r })
    }
}

/// Membership in the backward lightcone `{0 < t < T, 0 <= r <= T - t}`.
pub fn lightcone_contains<T: Real>(blowup_time: T, p: LightconePoint<T>) -> bool {
    p.t > T::zero() && p.t < blowup_time && p.r >= T::zero() && p.r <= blowup_time - p.t
}

/// Time `T - r0` at which the sphere of initial radius `r0` has collapsed,
/// i.e. where the explicit solution vanishes at `r0`.
pub fn collapse_time<T: Real>(blowup_time: T, r0: T) -> Result<T> {
    if !(blowup_time.is_finite() && r0.is_finite()) {
        return Err(invalid("non-finite arguments"));
    }
    if !(r0 > T::zero() && r0 < blowup_time) {
        return Err(domain(format!("collapse radius must lie in (0, {blowup_time}), got {r0}")));
    }
    Ok(blowup_time - r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::residual::{hyperbolicity_monitor, membrane_residual, ode_residual};

    #[test]
    fn profile_examples() {
        let p = explicit_profile::<f64>(Branch::Plus, 0.0).unwrap();
        assert_eq!(p.phi(), 1.0);
        let edge = explicit_profile::<f64>(Branch::Plus, 1.0).unwrap();
        assert_eq!(edge.phi(), 0.0);
        assert!(edge.derivative_overflow());
        let mid = explicit_profile::<f64>(Branch::Plus, 0.6).unwrap().jet().unwrap();
        assert!((mid.phi - 0.8).abs() < 1e-15);
        assert!((mid.dphi + 0.75).abs() < 1e-15);
        assert!(matches!(explicit_profile::<f64>(Branch::Plus, 1.01), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn profiles_solve_the_profile_equation() {
        for branch in Branch::BOTH {
            for rho in [0.0, 0.1, 0.5, 0.9, 0.99] {
                let p = explicit_profile::<f64>(branch, rho).unwrap().jet().unwrap();
                assert!(ode_residual(&p, rho).unwrap().abs() < 1e-12, "rho = {rho}");
            }
        }
    }

    #[test]
    fn solution_examples() {
        let plus = ExplicitSolution::new(Branch::Plus, 1.0).unwrap();
        let j = plus.jet(0.0, 0.0).unwrap().jet().unwrap();
        assert_eq!((j.u, j.u_t, j.u_r), (1.0, -1.0, 0.0));
        let minus = ExplicitSolution::new(Branch::Minus, 1.0).unwrap();
        assert_eq!(minus.value(0.0, 0.0).unwrap(), -1.0);
        let edge = plus.jet(0.5, 0.5).unwrap();
        assert_eq!(edge.value(), 0.0);
        assert!(edge.derivative_overflow());
        assert!(plus.jet(0.5, 0.6).is_err());
        assert!(plus.jet(1.0, 0.0).is_err());
        assert!(ExplicitSolution::new(Branch::Plus, 0.0).is_err());
    }

    #[test]
    fn solution_satisfies_membrane_equation_and_is_lightlike() {
        let s = ExplicitSolution::new(Branch::Plus, 1.0f64).unwrap();
        let j = s.jet(0.0, 0.3).unwrap().jet().unwrap();
        assert!(membrane_residual(&j, 0.3).unwrap().abs() < 1e-12);
        assert!(hyperbolicity_monitor(&j).unwrap().abs() < 1e-12);
    }

    #[test]
    fn axis_curvature() {
        let s = ExplicitSolution::new(Branch::Plus, 1.0f64).unwrap();
        assert_eq!(s.axis_second_derivative(0.5).unwrap(), -2.0);
        assert_eq!(s.axis_second_derivative(0.0).unwrap().abs(), 1.0);
        let s2 = ExplicitSolution::new(Branch::Plus, 2.0f64).unwrap();
        assert_eq!(s2.axis_second_derivative(1.0).unwrap().abs(), 1.0);
        assert!(s.axis_second_derivative(1.0).is_err());
        // matches the r -> 0 limit of the jet
        let j = s.jet(0.25, 0.0).unwrap().jet().unwrap();
        assert_eq!(j.u_rr, s.axis_second_derivative(0.25).unwrap());
    }

    #[test]
    fn lightcone_and_collapse() {
        let p = |t, r| LightconePoint::new(t, r).unwrap();
        assert!(lightcone_contains(1.0, p(0.5, 0.3)));
        assert!(!lightcone_contains(1.0, p(0.5, 0.6)));
        assert!(!lightcone_contains(1.0, p(1.0, 0.0)));
        assert!((collapse_time(1.0f64, 0.3).unwrap() - 0.7).abs() < 1e-15);
        assert!((collapse_time(1.0f64, 1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(collapse_time(1.0, 1.0).is_err());
        let t = collapse_time(2.0f64, 0.5).unwrap();
        let s = ExplicitSolution::new(Branch::Plus, 2.0).unwrap();
        assert!(s.value(t, 0.5).unwrap().abs() < 1e-12);
    }
}
