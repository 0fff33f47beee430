//! Adaptive Dormand-Prince 5(4) integration of the profile equation solved
//! for `phi''`:
//!
//! ```text
//! phi'' = -[phi' - phi' phi^2 + 2 rho phi phi'^2 + (1 - rho^2) phi'^3]
//!         / [rho (1 - rho^2 - phi^2)]
//! ```
//!
//! The division is only carried out while the degeneracy indicator
//! `D = 1 - rho^2 - phi^2` stays above a threshold in magnitude. When `D`
//! falls below it, or changes sign within a step, the march stops with a
//! degeneracy termination at a sample where `|D|` is under the threshold.

use std::fmt;

use super::series::TaylorSeed;
use crate::equations::ode_lower_order;
use crate::error::{validation, Error, Result};
use crate::scalar::Real;

/// Tolerances and limits of the profile integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileControls<T> {
    pub atol: T,
    pub rtol: T,
    /// `|1 - rho^2 - phi^2|` below which the march stops.
    pub degeneracy_threshold: T,
    /// Upper bound on the step, which also sets the sample density.
    pub max_step: T,
    pub initial_step: T,
    pub max_steps: usize,
    /// Number of equally spaced series samples on `[0, start_rho]`.
    pub taylor_samples: usize,
}

impl<T: Real> Default for ProfileControls<T> {
    fn default() -> Self {
        Self {
            atol: T::lit(1e-10),
            rtol: T::lit(1e-10),
            degeneracy_threshold: T::lit(1e-10),
            max_step: T::lit(0.01),
            initial_step: T::lit(1e-4),
            max_steps: 200_000,
            taylor_samples: 11,
        }
    }
}

impl<T: Real> ProfileControls<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v.is_finite() && v > T::zero();
        if !(pos(self.atol) && pos(self.rtol)) {
            return Err(validation("tolerances must be positive"));
        }
        if !(pos(self.degeneracy_threshold) && pos(self.max_step) && pos(self.initial_step)) {
            return Err(validation("threshold and step sizes must be positive"));
        }
        if self.max_steps == 0 || self.taylor_samples < 2 {
            return Err(validation("need at least one step and two series samples"));
        }
        Ok(())
    }
}

/// How a profile integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedEnd,
    DegeneracyHit,
    StepFailure,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::ReachedEnd => "reached_end",
            Termination::DegeneracyHit => "degeneracy_hit",
            Termination::StepFailure => "step_failure",
        })
    }
}

/// Sampled profile trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution<T> {
    rho: Vec<T>,
    phi: Vec<T>,
    dphi: Vec<T>,
    seed: Option<TaylorSeed<T>>,
    termination: Termination,
}

impl<T: Real> ProfileSolution<T> {
    /// Wraps externally produced samples, checking finiteness and ordering.
    pub fn from_samples(
        rho: Vec<T>,
        phi: Vec<T>,
        dphi: Vec<T>,
        seed: Option<TaylorSeed<T>>,
        termination: Termination,
    ) -> Result<Self> {
        if rho.len() != phi.len() || rho.len() != dphi.len() {
            return Err(validation("sample arrays differ in length"));
        }
        if rho.is_empty() {
            return Err(validation("empty profile"));
        }
        if !rho.iter().chain(&phi).chain(&dphi).all(|v| v.is_finite()) {
            return Err(validation("non-finite profile sample"));
        }
        if rho[0] < T::zero() || rho.windows(2).any(|w| w[1] <= w[0]) {
            return Err(validation("rho samples must be non-negative and strictly increasing"));
        }
        Ok(Self { rho, phi, dphi, seed, termination })
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn dphi(&self) -> &[T] {
        &self.dphi
    }

    pub fn seed(&self) -> Option<&TaylorSeed<T>> {
        self.seed.as_ref()
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Final sample `(rho, phi, phi')`.
    pub fn last(&self) -> (T, T, T) {
        let i = self.rho.len() - 1;
        (self.rho[i], self.phi[i], self.dphi[i])
    }

    /// `1 - rho^2 - phi^2` at every sample.
    pub fn degeneracy_indicator(&self) -> Vec<T> {
        self.rho.iter().zip(&self.phi).map(|(&r, &p)| T::one() - r * r - p * p).collect()
    }

    /// Largest `|phi - f(rho)|` over the samples with `rho <= rho_max`.
    pub fn max_deviation_from(&self, rho_max: T, f: impl Fn(T) -> T) -> T {
        self.rho
            .iter()
            .zip(&self.phi)
            .filter(|(&r, _)| r <= rho_max)
            .map(|(&r, &p)| (p - f(r)).abs())
            .fold(T::zero(), T::max)
    }
}

/// Integrates the profile from a regular seed: series samples on
/// `[0, start_rho]`, then adaptive steps up to `rho_end`.
pub fn integrate_profile<T: Real>(
    seed: &TaylorSeed<T>,
    rho_end: T,
    controls: &ProfileControls<T>,
) -> Result<ProfileSolution<T>> {
    controls.validate()?;
    if !seed.is_regular() {
        return Err(validation(format!(
            "seed (a = {}, b = {}) violates the axis balance",
            seed.a(),
            seed.b()
        )));
    }
    check_end(seed.start_rho(), rho_end)?;
    let n = controls.taylor_samples;
    let mut out = Samples::default();
    for i in 0..n {
        let rho = seed.start_rho() * T::from_index(i) / T::from_index(n - 1);
        let j = seed.series_jet(rho);
        out.push(rho, j.phi, j.dphi);
    }
    let (r0, p0, d0) = out.last();
    let termination = march(&mut out, r0, [p0, d0], rho_end, controls);
    Ok(out.finish(Some(seed.clone()), termination))
}

/// Integrates the profile equation as an initial-value problem from
/// `(rho0, phi0, dphi0)` with `rho0 > 0`.
pub fn integrate_ivp<T: Real>(
    rho0: T,
    phi0: T,
    dphi0: T,
    rho_end: T,
    controls: &ProfileControls<T>,
) -> Result<ProfileSolution<T>> {
    controls.validate()?;
    if !(phi0.is_finite() && dphi0.is_finite()) {
        return Err(Error::InvalidInput("non-finite initial data".into()));
    }
    if !(rho0.is_finite() && rho0 > T::zero()) {
        return Err(Error::Domain(format!("initial rho must be positive, got {rho0}")));
    }
    check_end(rho0, rho_end)?;
    let mut out = Samples::default();
    out.push(rho0, phi0, dphi0);
    let termination = march(&mut out, rho0, [phi0, dphi0], rho_end, controls);
    Ok(out.finish(None, termination))
}

fn check_end<T: Real>(start: T, rho_end: T) -> Result<()> {
    if !rho_end.is_finite() || rho_end >= T::one() {
        return Err(Error::Domain(format!("rho_end must be finite and below 1, got {rho_end}")));
    }
    if rho_end <= start {
        return Err(Error::Domain(format!("rho_end = {rho_end} does not exceed the start {start}")));
    }
    Ok(())
}

#[derive(Default)]
struct Samples<T> {
    rho: Vec<T>,
    phi: Vec<T>,
    dphi: Vec<T>,
}

impl<T: Real> Samples<T> {
    fn push(&mut self, r: T, p: T, d: T) {
        self.rho.push(r);
        self.phi.push(p);
        self.dphi.push(d);
    }

    fn last(&self) -> (T, T, T) {
        let i = self.rho.len() - 1;
        (self.rho[i], self.phi[i], self.dphi[i])
    }

    fn finish(self, seed: Option<TaylorSeed<T>>, termination: Termination) -> ProfileSolution<T> {
        ProfileSolution { rho: self.rho, phi: self.phi, dphi: self.dphi, seed, termination }
    }
}

fn indicator<T: Real>(rho: T, phi: T) -> T {
    T::one() - rho * rho - phi * phi
}

/// Right-hand side `(phi', phi'')`; `None` where the division is meaningless.
fn rhs<T: Real>(rho: T, y: [T; 2]) -> Option<[T; 2]> {
    let d = indicator(rho, y[0]);
    let d2 = -ode_lower_order(y[0], y[1], rho) / (rho * d);
    if d2.is_finite() {
        Some([y[1], d2])
    } else {
        None
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One trial step: fifth-order solution and scaled error norm.
fn dp_step<T: Real>(rho: T, y: [T; 2], h: T, atol: T, rtol: T) -> Option<([T; 2], T)> {
    let mut k = [[T::zero(); 2]; 7];
    for s in 0..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = T::lit(A[s][j]);
            ys[0] = ys[0] + h * a * kj[0];
            ys[1] = ys[1] + h * a * kj[1];
        }
        k[s] = rhs(rho + T::lit(C[s]) * h, ys)?;
    }
    let mut y5 = y;
    let mut err = T::zero();
    for i in 0..2 {
        let (mut s5, mut s4) = (T::zero(), T::zero());
        for s in 0..7 {
            s5 = s5 + T::lit(B5[s]) * k[s][i];
            s4 = s4 + T::lit(B4[s]) * k[s][i];
        }
        y5[i] = y[i] + h * s5;
        let sc = atol + rtol * y[i].abs().max(y5[i].abs());
        err = err.max((h * (s5 - s4)).abs() / sc);
    }
    if y5.iter().all(|v| v.is_finite()) && err.is_finite() {
        Some((y5, err))
    } else {
        None
    }
}

fn march<T: Real>(
    out: &mut Samples<T>,
    mut rho: T,
    mut y: [T; 2],
    rho_end: T,
    c: &ProfileControls<T>,
) -> Termination {
    let thr = c.degeneracy_threshold;
    let mut d_prev = indicator(rho, y[0]);
    if d_prev.abs() < thr {
        return Termination::DegeneracyHit;
    }
    let h_min = T::lit(64.0) * T::epsilon() * rho_end.abs().max(T::one());
    let mut h = c.initial_step.min(c.max_step);
    let mut steps = 0usize;
    while rho < rho_end {
        if steps >= c.max_steps {
            return Termination::StepFailure;
        }
        steps += 1;
        let remaining = rho_end - rho;
        let last = h >= remaining;
        let h_try = if last { remaining } else { h };
        let Some((y_new, err)) = dp_step(rho, y, h_try, c.atol, c.rtol) else {
            h = h_try * T::lit(0.25);
            if h < h_min {
                return Termination::StepFailure;
            }
            continue;
        };
        if err > T::one() {
            let f = (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2));
            h = h_try * f;
            if h < h_min {
                return Termination::StepFailure;
            }
            continue;
        }
        let rho_new = if last { rho_end } else { rho + h_try };
        let d_new = indicator(rho_new, y_new[0]);
        if d_new.abs() < thr {
            out.push(rho_new, y_new[0], y_new[1]);
            return Termination::DegeneracyHit;
        }
        if d_new.signum() != d_prev.signum() {
            return locate_degeneracy(out, rho, y, h_try, c);
        }
        rho = rho_new;
        y = y_new;
        d_prev = d_new;
        out.push(rho, y[0], y[1]);
        let grow = if err > T::zero() {
            (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0))
        } else {
            T::lit(5.0)
        };
        h = (h_try * grow).min(c.max_step);
    }
    Termination::ReachedEnd
}

/// Bisects the step length within `(0, h)` for a sample where the
/// indicator, which changed sign over the step, is below the threshold.
fn locate_degeneracy<T: Real>(
    out: &mut Samples<T>,
    rho: T,
    y: [T; 2],
    h: T,
    c: &ProfileControls<T>,
) -> Termination {
    let d0 = indicator(rho, y[0]);
    let (mut lo, mut hi) = (T::zero(), h);
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let Some((ym, _)) = dp_step(rho, y, mid, c.atol, c.rtol) else {
            hi = mid;
            continue;
        };
        let dm = indicator(rho + mid, ym[0]);
        if dm.abs() < c.degeneracy_threshold {
            out.push(rho + mid, ym[0], ym[1]);
            return Termination::DegeneracyHit;
        }
        if dm.signum() == d0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Termination::StepFailure
}
