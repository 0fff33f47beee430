//! Grids, states and initial data in similarity coordinates.

use crate::equations::{explicit_profile, Branch};
use crate::error::{validation, Error, Result};
use crate::scalar::{all_finite, Real};

/// Uniform grid on `[rho_min, rho_max]` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityGrid<T> {
    rho_min: T,
    rho_max: T,
    n: usize,
}

impl<T: Real> SimilarityGrid<T> {
    pub const MIN_CELLS: usize = 16;

    pub fn new(rho_min: T, rho_max: T, n: usize) -> Result<Self> {
        if !(rho_min.is_finite() && rho_max.is_finite()) {
            return Err(Error::InvalidInput("non-finite grid bounds".into()));
        }
        if !(rho_min > T::zero() && rho_min < rho_max && rho_max <= T::one()) {
            return Err(validation(format!("need 0 < rho_min < rho_max <= 1, got [{rho_min}, {rho_max}]")));
        }
        if n < Self::MIN_CELLS {
            return Err(validation(format!("need at least {} cells, got {n}", Self::MIN_CELLS)));
        }
        Ok(Self { rho_min, rho_max, n })
    }

    pub fn rho_min(&self) -> T {
        self.rho_min
    }

    pub fn rho_max(&self) -> T {
        self.rho_max
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    pub fn spacing(&self) -> T {
        (self.rho_max - self.rho_min) / T::from_index(self.n)
    }

    pub fn rho(&self, i: usize) -> T {
        if i == self.n {
            self.rho_max
        } else {
            self.rho_min + T::from_index(i) * self.spacing()
        }
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.nodes()).map(|i| self.rho(i)).collect()
    }
}

/// Samples of `v(tau, rho)` and `v_tau` on a similarity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityState<T> {
    pub tau: T,
    pub grid: SimilarityGrid<T>,
    pub v_tilde: Vec<T>,
    pub v_tilde_tau: Vec<T>,
}

impl<T: Real> SimilarityState<T> {
    pub fn new(tau: T, grid: SimilarityGrid<T>, v_tilde: Vec<T>, v_tilde_tau: Vec<T>) -> Result<Self> {
        if v_tilde.len() != grid.nodes() || v_tilde_tau.len() != grid.nodes() {
            return Err(validation(format!(
                "state arrays must have {} entries, got {} and {}",
                grid.nodes(),
                v_tilde.len(),
                v_tilde_tau.len()
            )));
        }
        if !tau.is_finite() || !all_finite(&v_tilde) || !all_finite(&v_tilde_tau) {
            return Err(Error::InvalidInput("non-finite similarity state".into()));
        }
        Ok(Self { tau, grid, v_tilde, v_tilde_tau })
    }

    /// Samples `v` and `v_tau` from closures of `rho`.
    pub fn sample(
        tau: T,
        grid: SimilarityGrid<T>,
        v: impl Fn(T) -> T,
        v_tau: impl Fn(T) -> T,
    ) -> Result<Self> {
        let rho = grid.coordinates();
        Self::new(tau, grid, rho.iter().map(|&r| v(r)).collect(), rho.iter().map(|&r| v_tau(r)).collect())
    }

    /// Largest `|v - reference|` over the nodes.
    pub fn sup_deviation(&self, reference: &[T]) -> T {
        self.v_tilde.iter().zip(reference).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max)
    }
}

/// Explicit profile `branch * sqrt(1 - rho^2)` at the grid nodes.
pub fn explicit_profile_samples<T: Real>(branch: Branch, grid: &SimilarityGrid<T>) -> Result<Vec<T>> {
    grid.coordinates().into_iter().map(|r| explicit_profile(branch, r).map(|e| e.phi())).collect()
}

/// Compactly supported smooth bump `exp(1 - 1 / (1 - x^2))`,
/// `x = (rho - center) / width`, with peak value one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump<T> {
    pub center: T,
    pub width: T,
}

impl<T: Real> Bump<T> {
    pub fn new(center: T, width: T) -> Result<Self> {
        if !(center.is_finite() && width.is_finite() && width > T::zero()) {
            return Err(validation(format!(
                "bump needs a finite centre and positive width, got ({center}, {width})"
            )));
        }
        Ok(Self { center, width })
    }

    pub fn eval(&self, rho: T) -> T {
        let x = (rho - self.center) / self.width;
        let q = T::one() - x * x;
        if q <= T::zero() {
            T::zero()
        } else {
            (T::one() - T::one() / q).exp()
        }
    }

    pub fn support(&self) -> (T, T) {
        (self.center - self.width, self.center + self.width)
    }
}

/// Largest admissible perturbation amplitude.
pub const MAX_EPSILON: f64 = 0.1;

/// Static explicit profile plus `epsilon * g`, with `v_tau = 0`.
pub fn perturbed_initial_data<T: Real>(
    branch: Branch,
    grid: SimilarityGrid<T>,
    bump: Bump<T>,
    epsilon: T,
) -> Result<SimilarityState<T>> {
    if !(epsilon.is_finite() && epsilon.abs() <= T::lit(MAX_EPSILON)) {
        return Err(validation(format!("|epsilon| must not exceed {MAX_EPSILON}, got {epsilon}")));
    }
    let (lo, hi) = bump.support();
    if !(lo > grid.rho_min() && hi < grid.rho_max()) {
        return Err(validation(format!(
            "bump support [{lo}, {hi}] must lie strictly inside ({}, {})",
            grid.rho_min(),
            grid.rho_max()
        )));
    }
    let phi = explicit_profile_samples(branch, &grid)?;
    let rho = grid.coordinates();
    let v = phi.iter().zip(&rho).map(|(&p, &r)| p + epsilon * bump.eval(r)).collect();
    SimilarityState::new(T::zero(), grid, v, vec![T::zero(); grid.nodes()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SimilarityGrid<f64> {
        SimilarityGrid::new(0.01, 0.99, 98).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = grid();
        assert_eq!(g.rho(0), 0.01);
        assert_eq!(g.rho(98), 0.99);
        assert!((g.spacing() - 0.01).abs() < 1e-15);
        assert!(SimilarityGrid::new(0.0, 0.99, 64).is_err());
        assert!(SimilarityGrid::new(0.5, 1.2, 64).is_err());
    }

    #[test]
    fn perturbation_examples() {
        let g = grid();
        let phi = explicit_profile_samples(Branch::Plus, &g).unwrap();
        let b = Bump::new(0.5, 0.2).unwrap();
        let s0 = perturbed_initial_data(Branch::Plus, g, b, 0.0).unwrap();
        assert_eq!(s0.v_tilde, phi);
        let s = perturbed_initial_data(Branch::Plus, g, b, 1e-3).unwrap();
        assert!((s.sup_deviation(&phi) - 1e-3).abs() < 1e-15);
        let m = perturbed_initial_data(Branch::Plus, g, b, -1e-3).unwrap();
        for ((&p, &m), &f) in s.v_tilde.iter().zip(&m.v_tilde).zip(&phi) {
            assert_eq!(p - f, -(m - f));
        }
        assert!(s.v_tilde_tau.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn perturbation_rejections() {
        let g = grid();
        let wide = Bump::new(0.5, 0.49).unwrap();
        assert!(perturbed_initial_data(Branch::Plus, g, wide, 1e-3).is_err());
        let b = Bump::new(0.5, 0.2).unwrap();
        assert!(perturbed_initial_data(Branch::Plus, g, b, 0.2).is_err());
    }
}
