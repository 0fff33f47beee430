//! Field samplers and the two transformations acting on them: the scaling
//! symmetry and the change to similarity coordinates.

use super::explicit::ExplicitSolution;
use super::jet::SecondOrderJet;
use crate::error::{domain, invalid, Result};
use crate::scalar::Real;

/// A scalar field `u(t, r)` that can be sampled pointwise.
pub trait Field<T: Real> {
    fn value(&self, t: T, r: T) -> Result<T>;
}

/// A field whose exact second-order jet is available.
pub trait JetField<T: Real>: Field<T> {
    fn jet(&self, t: T, r: T) -> Result<SecondOrderJet<T>>;
}

impl<T: Real, F> Field<T> for F
where
    F: Fn(T, T) -> Result<T>,
{
    fn value(&self, t: T, r: T) -> Result<T> {
        self(t, r)
    }
}

impl<T: Real> Field<T> for ExplicitSolution<T> {
    fn value(&self, t: T, r: T) -> Result<T> {
        ExplicitSolution::value(self, t, r)
    }
}

impl<T: Real> JetField<T> for ExplicitSolution<T> {
    fn jet(&self, t: T, r: T) -> Result<SecondOrderJet<T>> {
        ExplicitSolution::jet(self, t, r)?
            .jet()
            .ok_or_else(|| domain(format!("derivatives diverge on the lightcone at ({t}, {r})")))
    }
}

/// `u_lambda(t, r) = lambda * u(t / lambda, r / lambda)`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<F, T> {
    inner: F,
    lambda: T,
}

impl<F, T: Real> Scaled<F, T> {
    pub fn lambda(&self) -> T {
        self.lambda
    }
}

pub fn scaling_transform<T: Real, F: Field<T>>(inner: F, lambda: T) -> Result<Scaled<F, T>> {
    if !(lambda.is_finite() && lambda > T::zero()) {
        return Err(invalid(format!("scaling factor must be positive, got {lambda}")));
    }
    Ok(Scaled { inner, lambda })
}

impl<T: Real, F: Field<T>> Field<T> for Scaled<F, T> {
    fn value(&self, t: T, r: T) -> Result<T> {
        Ok(self.lambda * self.inner.value(t / self.lambda, r / self.lambda)?)
    }
}

impl<T: Real, F: JetField<T>> JetField<T> for Scaled<F, T> {
    fn jet(&self, t: T, r: T) -> Result<SecondOrderJet<T>> {
        let l = self.lambda;
        let j = self.inner.jet(t / l, r / l)?;
        Ok(SecondOrderJet {
            u: l * j.u,
            u_t: j.u_t,
            u_r: j.u_r,
            u_tt: j.u_tt / l,
            u_tr: j.u_tr / l,
            u_rr: j.u_rr / l,
        })
    }
}

/// Similarity coordinates `(tau, rho) = (-log(T - t), r / (T - t))`.
pub fn to_similarity<T: Real>(blowup_time: T, t: T, r: T) -> Result<(T, T)> {
    if !(blowup_time.is_finite() && t.is_finite() && r.is_finite()) {
        return Err(invalid("non-finite arguments"));
    }
    let s = blowup_time - t;
    if s <= T::zero() {
        return Err(domain(format!("similarity coordinates need t < T, got t = {t}")));
    }
    Ok((-s.ln(), r / s))
}

/// Inverse of [`to_similarity`]: `t = T - e^-tau`, `r = rho e^-tau`.
pub fn from_similarity<T: Real>(blowup_time: T, tau: T, rho: T) -> Result<(T, T)> {
    if !(blowup_time.is_finite() && tau.is_finite() && rho.is_finite()) {
        return Err(invalid("non-finite arguments"));
    }
    let s = (-tau).exp();
    Ok((blowup_time - s, rho * s))
}

/// `v(tau, rho) = e^tau u(T - e^-tau, rho e^-tau)`, sampled in `(tau, rho)`.
#[derive(Debug, Clone, Copy)]
pub struct SimilarityView<F, T> {
    inner: F,
    blowup_time: T,
}

pub fn similarity_field<T: Real, F: Field<T>>(blowup_time: T, inner: F) -> Result<SimilarityView<F, T>> {
    if !(blowup_time.is_finite() && blowup_time > T::zero()) {
        return Err(invalid(format!("blow-up time must be positive, got {blowup_time}")));
    }
    Ok(SimilarityView { inner, blowup_time })
}

impl<T: Real, F: Field<T>> SimilarityView<F, T> {
    pub fn value(&self, tau: T, rho: T) -> Result<T> {
        let (t, r) = from_similarity(self.blowup_time, tau, rho)?;
        Ok(tau.exp() * self.inner.value(t, r)?)
    }
}

impl<T: Real, F: JetField<T>> SimilarityView<F, T> {
    /// Jet in `(tau, rho)` by the chain rule, with `s = T - t = e^-tau`:
    ///
    /// ```text
    /// v_rho = u_r,  v_tau = v + u_t - rho u_r,  v_rhorho = s u_rr,
    /// v_taurho = s (u_tr - rho u_rr),
    /// v_tautau = v_tau + s (u_tt - 2 rho u_tr + rho^2 u_rr)
    /// ```
    pub fn jet(&self, tau: T, rho: T) -> Result<SecondOrderJet<T>> {
        let (t, r) = from_similarity(self.blowup_time, tau, rho)?;
        let s = (-tau).exp();
        let j = self.inner.jet(t, r)?;
        let two = T::lit(2.0);
        let v = j.u / s;
        let v_tau = v + j.u_t - rho * j.u_r;
        SecondOrderJet::new(
            v,
            v_tau,
            j.u_r,
            v_tau + s * (j.u_tt - two * rho * j.u_tr + rho * rho * j.u_rr),
            s * (j.u_tr - rho * j.u_rr),
            s * j.u_rr,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::jet::Branch;
    use crate::equations::residual::{membrane_residual, similarity_residual};

    #[test]
    fn coordinate_examples() {
        let (tau, rho) = to_similarity(1.0, 0.9, 0.05).unwrap();
        assert!((tau - 10f64.ln()).abs() < 1e-12);
        assert!((rho - 0.5).abs() < 1e-12);
        assert_eq!(to_similarity(1.0, 0.0, 0.0).unwrap(), (0.0, 0.0));
        assert!(to_similarity(1.0, 1.0, 0.0).is_err());
        let (t, r) = from_similarity(1.0, tau, rho).unwrap();
        assert!((t - 0.9).abs() < 1e-12 && (r - 0.05).abs() < 1e-12);
    }

    #[test]
    fn similarity_view_examples() {
        let plus = ExplicitSolution::new(Branch::Plus, 1.0f64).unwrap();
        let view = similarity_field(1.0, plus).unwrap();
        for tau in [0.0, 1.0, 4.0] {
            assert!((view.value(tau, 0.6).unwrap() - 0.8).abs() < 1e-12);
        }
        let zero = similarity_field(1.0, |_t: f64, _r: f64| Ok(0.0)).unwrap();
        assert_eq!(zero.value(2.0, 0.3).unwrap(), 0.0);
        let gap = similarity_field(1.0, |t: f64, _r: f64| Ok(1.0 - t)).unwrap();
        assert!((gap.value(3.0, 0.3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_examples() {
        let plus = ExplicitSolution::new(Branch::Plus, 1.0f64).unwrap();
        let same = scaling_transform(plus, 1.0).unwrap();
        assert_eq!(same.value(0.2, 0.3).unwrap(), plus.value(0.2, 0.3).unwrap());
        let scaled = scaling_transform(plus, 2.5).unwrap();
        let target = ExplicitSolution::new(Branch::Plus, 2.5).unwrap();
        for (t, r) in [(0.0, 0.0), (1.0, 0.7), (2.0, 0.4)] {
            assert!((scaled.value(t, r).unwrap() - target.value(t, r).unwrap()).abs() < 1e-12);
        }
        assert!(scaling_transform(plus, 0.0).is_err());
        assert!(scaling_transform(plus, -1.0).is_err());
    }

    #[test]
    fn similarity_residual_is_rescaled_membrane_residual() {
        // A field that is not a solution: compare both residuals through the
        // chain-rule jet.
        struct Probe;
        impl Field<f64> for Probe {
            fn value(&self, t: f64, r: f64) -> Result<f64> {
                Ok(0.3 * (t + 0.2).sin() * (1.0 + r * r) + 0.1 * r * r * t)
            }
        }
        impl JetField<f64> for Probe {
            fn jet(&self, t: f64, r: f64) -> Result<SecondOrderJet<f64>> {
                let (s, c) = ((t + 0.2).sin(), (t + 0.2).cos());
                SecondOrderJet::new(
                    self.value(t, r)?,
                    0.3 * c * (1.0 + r * r) + 0.1 * r * r,
                    0.6 * s * r + 0.2 * r * t,
                    -0.3 * s * (1.0 + r * r),
                    0.6 * c * r + 0.2 * r,
                    0.6 * s + 0.2 * t,
                )
            }
        }
        let view = similarity_field(1.0, Probe).unwrap();
        for (tau, rho) in [(0.1, 0.2), (0.7, 0.5), (1.5, 0.9)] {
            let (t, r) = from_similarity(1.0, tau, rho).unwrap();
            let s = 1.0 - t;
            let lhs = similarity_residual(&view.jet(tau, rho).unwrap(), rho).unwrap();
            let rhs = s * membrane_residual(&Probe.jet(t, r).unwrap(), r).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        }
    }
}
