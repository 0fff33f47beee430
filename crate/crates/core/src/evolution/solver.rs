//! Method-of-lines march of the physical-frame equations: finite-difference
//! stencils in space, classical Runge-Kutta in time, with a step size set
//! by the largest frozen-coefficient characteristic speed.

use std::fmt;

use super::grid::{FieldState, Geometry, RadialGrid};
use super::physics::{
    axis_acceleration, hyperbolicity, interior_acceleration, max_characteristic_speed, planar_acceleration,
};
use crate::error::{validation, Result};
use crate::mol::{Rk4, SecondOrderSystem};
use crate::scalar::Real;
use crate::stencil::{LeftEnd, UniformStencils};

/// Step-size, stopping and output controls of [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveControls<T> {
    /// Courant number in `(0, 1]`.
    pub cfl: T,
    /// The run halts once the smallest hyperbolicity monitor is at or below
    /// this value.
    pub h_floor: T,
    /// Accuracy order of the spatial stencils (2, 4, 6 or 8).
    pub stencil_order: usize,
    /// Lower bound on the speed used in the step-size rule.
    pub min_wave_speed: T,
    pub max_steps: usize,
    /// Keep a snapshot every this many steps; zero keeps only the initial
    /// and final states.
    pub snapshot_every: usize,
    pub geometry: Geometry,
}

impl<T: Real> Default for EvolveControls<T> {
    fn default() -> Self {
        Self {
            cfl: T::lit(0.5),
            h_floor: T::lit(1e-6),
            stencil_order: 2,
            min_wave_speed: T::one(),
            max_steps: 1_000_000,
            snapshot_every: 0,
            geometry: Geometry::Radial,
        }
    }
}

impl<T: Real> EvolveControls<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl.is_finite() && self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(validation(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !self.h_floor.is_finite() {
            return Err(validation("h_floor must be finite"));
        }
        if !(self.min_wave_speed.is_finite() && self.min_wave_speed > T::zero()) {
            return Err(validation("min_wave_speed must be positive"));
        }
        if self.max_steps == 0 {
            return Err(validation("max_steps must be positive"));
        }
        Ok(())
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorSample<T> {
    pub t: T,
    /// Smallest `1 - u_t^2 + u_r^2` over the nodes.
    pub min_h: T,
    /// `u_rr` at node 0 (the axis in radial geometry).
    pub axis_urr: T,
    pub max_abs_u: T,
}

/// Why a march stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum EvolveTermination<T> {
    ReachedEnd,
    /// The hyperbolicity monitor reached the floor; the final state is the
    /// first one at or below it.
    Degeneracy {
        t: T,
        min_h: T,
    },
    /// A step produced non-finite values; the final state is the last good
    /// one.
    NumericalFailure {
        t: T,
        message: String,
    },
    StepLimit {
        t: T,
    },
}

impl<T: Real> EvolveTermination<T> {
    pub fn is_complete(&self) -> bool {
        matches!(self, EvolveTermination::ReachedEnd)
    }

    pub fn label(&self) -> &'static str {
        match self {
            EvolveTermination::ReachedEnd => "reached_end",
            EvolveTermination::Degeneracy { .. } => "degeneracy",
            EvolveTermination::NumericalFailure { .. } => "numerical_failure",
            EvolveTermination::StepLimit { .. } => "step_limit",
        }
    }
}

impl<T: Real> fmt::Display for EvolveTermination<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvolveTermination::ReachedEnd => write!(f, "reached end"),
            EvolveTermination::Degeneracy { t, min_h } => {
                write!(f, "hyperbolicity degenerated at t = {t} (min h = {min_h})")
            }
            EvolveTermination::NumericalFailure { t, message } => {
                write!(f, "numerical failure after t = {t}: {message}")
            }
            EvolveTermination::StepLimit { t } => write!(f, "step limit reached at t = {t}"),
        }
    }
}

/// Result of a march.
#[derive(Debug, Clone)]
pub struct Evolution<T> {
    /// Final state (the last good one on failure).
    pub state: FieldState<T>,
    pub monitors: Vec<MonitorSample<T>>,
    pub snapshots: Vec<FieldState<T>>,
    pub termination: EvolveTermination<T>,
    pub steps: usize,
}

/// Semi-discrete membrane or string system on a uniform grid.
pub struct MembraneSystem<T> {
    geometry: Geometry,
    stencils: UniformStencils<T>,
    r: Vec<T>,
}

impl<T: Real> MembraneSystem<T> {
    pub fn new(grid: &RadialGrid<T>, geometry: Geometry, stencil_order: usize) -> Result<Self> {
        let left = match geometry {
            Geometry::Radial => LeftEnd::EvenReflection,
            Geometry::Planar => LeftEnd::OneSided,
        };
        let stencils = UniformStencils::new(grid.nodes(), grid.spacing(), stencil_order, left)?;
        Ok(Self { geometry, stencils, r: grid.coordinates() })
    }

    pub fn spacing(&self) -> T {
        self.stencils.spacing()
    }

    /// Diagnostics of a state, with the largest characteristic speed.
    pub fn monitor(&self, s: &FieldState<T>) -> (MonitorSample<T>, T) {
        let n = s.len();
        let (mut ur, mut urr) = (vec![T::zero(); n], vec![T::zero(); n]);
        self.stencils.apply(&s.u, &mut ur, &mut urr);
        let mut min_h = T::infinity();
        let mut speed = T::zero();
        let mut max_abs_u = T::zero();
        for ((&u_r, &w), &u) in ur.iter().zip(&s.w).zip(&s.u) {
            min_h = min_h.min(hyperbolicity(u_r, w));
            speed = speed.max(max_characteristic_speed(u_r, w));
            max_abs_u = max_abs_u.max(u.abs());
        }
        (MonitorSample { t: s.t, min_h, axis_urr: urr[0], max_abs_u }, speed)
    }
}

impl<T: Real> SecondOrderSystem<T> for MembraneSystem<T> {
    fn acceleration(&self, u: &[T], w: &[T], out: &mut [T]) -> Result<()> {
        let n = u.len();
        let (mut ur, mut urr, mut wr) = (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
        self.stencils.apply(u, &mut ur, &mut urr);
        self.stencils.apply_d1(w, &mut wr);
        match self.geometry {
            Geometry::Radial => {
                out[0] = axis_acceleration(urr[0], w[0]);
                for i in 1..n {
                    out[i] = interior_acceleration(ur[i], urr[i], w[i], wr[i], self.r[i]);
                }
            }
            Geometry::Planar => {
                for i in 0..n {
                    out[i] = planar_acceleration(ur[i], urr[i], w[i], wr[i]);
                }
            }
        }
        Ok(())
    }
}

/// Advances `initial` to `t_end`, halting early on degeneracy or failure.
pub fn evolve<T: Real>(
    initial: &FieldState<T>,
    grid: &RadialGrid<T>,
    t_end: T,
    controls: &EvolveControls<T>,
) -> Result<Evolution<T>> {
    controls.validate()?;
    if initial.len() != grid.nodes() {
        return Err(validation(format!("state has {} nodes, grid has {}", initial.len(), grid.nodes())));
    }
    if !(t_end.is_finite() && t_end >= initial.t) {
        return Err(validation(format!("t_end = {t_end} precedes the initial time {}", initial.t)));
    }
    let sys = MembraneSystem::new(grid, controls.geometry, controls.stencil_order)?;
    let mut state = initial.clone();
    let mut rk = Rk4::new(state.len());
    let (first, mut speed) = sys.monitor(&state);
    let mut monitors = vec![first];
    let mut snapshots = vec![state.clone()];
    let mut steps = 0usize;
    let dx = sys.spacing();
    let termination = loop {
        let m = monitors[monitors.len() - 1];
        if m.min_h <= controls.h_floor {
            break EvolveTermination::Degeneracy { t: state.t, min_h: m.min_h };
        }
        if state.t >= t_end {
            break EvolveTermination::ReachedEnd;
        }
        if steps >= controls.max_steps {
            break EvolveTermination::StepLimit { t: state.t };
        }
        let mut dt = controls.cfl * dx / speed.max(controls.min_wave_speed);
        let last = state.t + dt >= t_end;
        if last {
            dt = t_end - state.t;
        }
        if let Err(e) = rk.step(&sys, &mut state.u, &mut state.w, dt) {
            break EvolveTermination::NumericalFailure { t: state.t, message: e.to_string() };
        }
        state.t = if last { t_end } else { state.t + dt };
        steps += 1;
        let (m, s) = sys.monitor(&state);
        speed = s;
        monitors.push(m);
        if controls.snapshot_every > 0 && steps.is_multiple_of(controls.snapshot_every) {
            snapshots.push(state.clone());
        }
    };
    if snapshots.last().map(|s| s.t) != Some(state.t) {
        snapshots.push(state.clone());
    }
    Ok(Evolution { state, monitors, snapshots, termination, steps })
}
