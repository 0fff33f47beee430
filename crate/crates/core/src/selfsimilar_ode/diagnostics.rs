//! Checks applied to sampled profiles: parity at the axis and the profile
//! residual reconstructed from the samples by local finite differences.

use super::integrate::ProfileSolution;
use crate::equations::{ode_residual, ProfileJet};
use crate::error::{validation, Result};
use crate::scalar::Real;
use crate::stencil::fornberg_weights;

/// Nodes used by the one-sided axis estimates. Seven nodes make the
/// estimates exact for polynomials of degree six.
const AXIS_NODES: usize = 7;

/// Estimates of the odd derivatives of a profile at the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityReport<T> {
    /// `phi'(0)` from the `phi` samples.
    pub first: T,
    /// `phi'''(0)` from the `phi'` samples.
    pub third: T,
    /// `max(|first|, |third|)`.
    pub max_abs: T,
}

/// Estimates `phi'(0)` and `phi'''(0)` from the samples nearest the axis.
///
/// A centred difference of the even extension would return zero whatever
/// the data, so both estimates use one-sided stencils on the stored
/// samples: a nonzero value exposes an odd component.
pub fn parity_check<T: Real>(p: &ProfileSolution<T>) -> Result<ParityReport<T>> {
    if p.len() < AXIS_NODES {
        return Err(validation(format!("parity check needs {AXIS_NODES} samples, got {}", p.len())));
    }
    if p.rho()[0] != T::zero() {
        return Err(validation("parity check needs a sample on the axis"));
    }
    let nodes = &p.rho()[..AXIS_NODES];
    let w = fornberg_weights(T::zero(), nodes, 2);
    let dot = |c: &[T], f: &[T]| c.iter().zip(f).fold(T::zero(), |a, (&x, &y)| a + x * y);
    let first = dot(&w[1], &p.phi()[..AXIS_NODES]);
    let third = dot(&w[2], &p.dphi()[..AXIS_NODES]);
    Ok(ParityReport { first, third, max_abs: first.abs().max(third.abs()) })
}

/// Profile residual at every sample, with `phi''` obtained by a five-point
/// finite difference of the stored `phi'` samples.
pub fn finite_difference_residual<T: Real>(p: &ProfileSolution<T>) -> Result<Vec<T>> {
    const WIDTH: usize = 5;
    let n = p.len();
    if n < WIDTH {
        return Err(validation(format!("need {WIDTH} samples, got {n}")));
    }
    let (rho, phi, dphi) = (p.rho(), p.phi(), p.dphi());
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(WIDTH / 2).min(n - WIDTH);
            let w = fornberg_weights(rho[i], &rho[start..start + WIDTH], 1);
            let d2 = w[1].iter().zip(&dphi[start..start + WIDTH]).fold(T::zero(), |a, (&c, &v)| a + c * v);
            let jet = ProfileJet { phi: phi[i], dphi: dphi[i], d2phi: d2 };
            ode_residual(&jet, rho[i])
        })
        .collect()
}
