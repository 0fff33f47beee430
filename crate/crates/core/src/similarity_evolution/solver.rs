//! Method-of-lines march of the full nonlinear equation in similarity
//! coordinates.

use super::state::{SimilarityGrid, SimilarityState};
use crate::equations::{similarity_hyperbolicity, similarity_remainder, SecondOrderJet};
use crate::error::{validation, Error, Result};
use crate::evolution::EvolveTermination;
use crate::mol::{Rk4, SecondOrderSystem};
use crate::scalar::Real;
use crate::stencil::{LeftEnd, UniformStencils};

/// `v_tautau` from the similarity-frame equation at `rho > 0`, isolating
/// `v_tautau (1 + v_rho^2)` and moving every other term across. The jet's
/// `u_tt` slot is ignored.
pub fn similarity_acceleration<T: Real>(j: &SecondOrderJet<T>, rho: T) -> Result<T> {
    if !(rho.is_finite() && rho > T::zero()) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let a = -similarity_remainder(j, rho) / (T::one() + j.u_r * j.u_r);
    if a.is_finite() {
        Ok(a)
    } else {
        Err(Error::NumericalFailure(format!("non-finite acceleration at rho = {rho}")))
    }
}

/// Largest characteristic speed magnitude in the similarity frame,
/// `((rho - p B) +- sqrt(h)) / (1 + p^2)` with `B = v_tau - v`, `p = v_rho`.
pub fn similarity_characteristic_speed<T: Real>(v: T, v_tau: T, p: T, rho: T) -> T {
    let b = v_tau - v;
    let ut = b + rho * p;
    let h = (T::one() + p * p - ut * ut).max(T::zero()).sqrt();
    let c = rho - p * b;
    (c + h).abs().max((c - h).abs()) / (T::one() + p * p)
}

/// Controls of [`evolve_similarity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityControls<T> {
    pub cfl: T,
    /// Accuracy order of the spatial stencils. Sixth order by default: the
    /// `e^tau` growth of the unstable mode amplifies the truncation error of
    /// the static profile, which second order cannot hold below `1e-8` on
    /// practical grids.
    pub stencil_order: usize,
    pub min_wave_speed: T,
    pub max_steps: usize,
    pub snapshot_every: usize,
    /// Optional floor on the hyperbolicity monitor. Off by default, since
    /// the explicit profiles are lightlike and sit exactly at `h = 0`.
    pub h_floor: Option<T>,
}

impl<T: Real> Default for SimilarityControls<T> {
    fn default() -> Self {
        Self {
            cfl: T::lit(0.5),
            stencil_order: 6,
            min_wave_speed: T::one(),
            max_steps: 10_000_000,
            snapshot_every: 0,
            h_floor: None,
        }
    }
}

/// Perturbation size and hyperbolicity at one similarity time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample<T> {
    pub tau: T,
    /// `max |v_tilde - reference|` over the nodes.
    pub sup_norm: T,
    pub min_h: T,
}

#[derive(Debug, Clone)]
pub struct SimilarityEvolution<T> {
    pub state: SimilarityState<T>,
    pub norms: Vec<NormSample<T>>,
    pub snapshots: Vec<SimilarityState<T>>,
    pub termination: EvolveTermination<T>,
    pub steps: usize,
}

impl<T: Real> SimilarityEvolution<T> {
    pub fn taus(&self) -> Vec<T> {
        self.norms.iter().map(|n| n.tau).collect()
    }

    pub fn sup_norms(&self) -> Vec<T> {
        self.norms.iter().map(|n| n.sup_norm).collect()
    }

    pub fn max_sup_norm(&self) -> T {
        self.norms.iter().map(|n| n.sup_norm).fold(T::zero(), T::max)
    }
}

/// Semi-discrete similarity-frame system with one-sided stencils at both
/// ends and no boundary data.
pub struct SimilaritySystem<T> {
    stencils: UniformStencils<T>,
    rho: Vec<T>,
}

impl<T: Real> SimilaritySystem<T> {
    pub fn new(grid: &SimilarityGrid<T>, stencil_order: usize) -> Result<Self> {
        let stencils = UniformStencils::new(grid.nodes(), grid.spacing(), stencil_order, LeftEnd::OneSided)?;
        Ok(Self { stencils, rho: grid.coordinates() })
    }

    fn diagnostics(&self, v: &[T], w: &[T]) -> (T, T) {
        let n = v.len();
        let mut p = vec![T::zero(); n];
        self.stencils.apply_d1(v, &mut p);
        let mut min_h = T::infinity();
        let mut speed = T::zero();
        for i in 0..n {
            let j = SecondOrderJet { u: v[i], u_t: w[i], u_r: p[i], ..SecondOrderJet::zero() };
            min_h = min_h.min(similarity_hyperbolicity(&j, self.rho[i]));
            speed = speed.max(similarity_characteristic_speed(v[i], w[i], p[i], self.rho[i]));
        }
        (min_h, speed)
    }
}

impl<T: Real> SecondOrderSystem<T> for SimilaritySystem<T> {
    fn acceleration(&self, v: &[T], w: &[T], out: &mut [T]) -> Result<()> {
        let n = v.len();
        let (mut p, mut vrr, mut wr) = (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
        self.stencils.apply(v, &mut p, &mut vrr);
        self.stencils.apply_d1(w, &mut wr);
        for i in 0..n {
            let j =
                SecondOrderJet { u: v[i], u_t: w[i], u_r: p[i], u_tt: T::zero(), u_tr: wr[i], u_rr: vrr[i] };
            out[i] = similarity_acceleration(&j, self.rho[i])?;
        }
        Ok(())
    }
}

/// Advances `initial` to `tau_end`, recording `max |v_tilde - reference|`
/// after every step.
pub fn evolve_similarity<T: Real>(
    initial: &SimilarityState<T>,
    reference: &[T],
    tau_end: T,
    controls: &SimilarityControls<T>,
) -> Result<SimilarityEvolution<T>> {
    if !(controls.cfl.is_finite() && controls.cfl > T::zero() && controls.cfl <= T::one()) {
        return Err(validation(format!("cfl must lie in (0, 1], got {}", controls.cfl)));
    }
    if !(controls.min_wave_speed.is_finite() && controls.min_wave_speed > T::zero()) {
        return Err(validation("min_wave_speed must be positive"));
    }
    if reference.len() != initial.grid.nodes() {
        return Err(validation("reference profile does not match the grid"));
    }
    if !(tau_end.is_finite() && tau_end >= initial.tau) {
        return Err(validation(format!("tau_end = {tau_end} precedes the initial time {}", initial.tau)));
    }
    let sys = SimilaritySystem::new(&initial.grid, controls.stencil_order)?;
    let dx = initial.grid.spacing();
    let mut state = initial.clone();
    let mut rk = Rk4::new(state.v_tilde.len());
    let (mut min_h, mut speed) = sys.diagnostics(&state.v_tilde, &state.v_tilde_tau);
    let mut norms = vec![NormSample { tau: state.tau, sup_norm: state.sup_deviation(reference), min_h }];
    let mut snapshots = vec![state.clone()];
    let mut steps = 0usize;
    let termination = loop {
        if let Some(floor) = controls.h_floor {
            if min_h <= floor {
                break EvolveTermination::Degeneracy { t: state.tau, min_h };
            }
        }
        if state.tau >= tau_end {
            break EvolveTermination::ReachedEnd;
        }
        if steps >= controls.max_steps {
            break EvolveTermination::StepLimit { t: state.tau };
        }
        let mut dt = controls.cfl * dx / speed.max(controls.min_wave_speed);
        let last = state.tau + dt >= tau_end;
        if last {
            dt = tau_end - state.tau;
        }
        if let Err(e) = rk.step(&sys, &mut state.v_tilde, &mut state.v_tilde_tau, dt) {
            break EvolveTermination::NumericalFailure { t: state.tau, message: e.to_string() };
        }
        state.tau = if last { tau_end } else { state.tau + dt };
        steps += 1;
        (min_h, speed) = sys.diagnostics(&state.v_tilde, &state.v_tilde_tau);
        norms.push(NormSample { tau: state.tau, sup_norm: state.sup_deviation(reference), min_h });
        if controls.snapshot_every > 0 && steps.is_multiple_of(controls.snapshot_every) {
            snapshots.push(state.clone());
        }
    };
    if snapshots.last().map(|s| s.tau) != Some(state.tau) {
        snapshots.push(state.clone());
    }
    Ok(SimilarityEvolution { state, norms, snapshots, termination, steps })
}
