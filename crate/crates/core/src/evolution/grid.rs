//! Spatial grid and evolved state of the physical-frame solver.

use std::fmt;
use std::str::FromStr;

use crate::error::{validation, Error, Result};
use crate::scalar::{all_finite, Real};

/// Spatial setting of the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Geometry {
    /// Radially symmetric membrane; node 0 is the symmetry axis.
    #[default]
    Radial,
    /// Planar string in `(t, x)`; both ends are open.
    Planar,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Radial => "radial",
            Geometry::Planar => "planar",
        })
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial" => Ok(Geometry::Radial),
            "planar" => Ok(Geometry::Planar),
            other => Err(Error::InvalidInput(format!("unknown geometry {other:?}"))),
        }
    }
}

/// Uniform grid `r_i = i * r_max / n`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    r_max: T,
    n: usize,
}

impl<T: Real> RadialGrid<T> {
    /// Smallest accepted cell count.
    pub const MIN_CELLS: usize = 16;

    pub fn new(r_max: T, n: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > T::zero()) {
            return Err(validation(format!("r_max must be positive, got {r_max}")));
        }
        if n < Self::MIN_CELLS {
            return Err(validation(format!("need at least {} cells, got {n}", Self::MIN_CELLS)));
        }
        Ok(Self { r_max, n })
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    /// Number of cells; the grid has `n + 1` nodes.
    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    pub fn spacing(&self) -> T {
        self.r_max / T::from_index(self.n)
    }

    pub fn r(&self, i: usize) -> T {
        T::from_index(i) * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.nodes()).map(|i| self.r(i)).collect()
    }

    /// Samples `(u, w)` from closures on the grid at time `t`.
    pub fn sample(&self, t: T, u: impl Fn(T) -> T, w: impl Fn(T) -> T) -> Result<FieldState<T>> {
        let r = self.coordinates();
        FieldState::new(t, r.iter().map(|&x| u(x)).collect(), r.iter().map(|&x| w(x)).collect())
    }
}

/// Field values `u` and velocities `w = u_t` at every node at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub t: T,
    pub u: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Real> FieldState<T> {
    pub fn new(t: T, u: Vec<T>, w: Vec<T>) -> Result<Self> {
        if u.len() != w.len() {
            return Err(validation(format!("u has {} nodes but w has {}", u.len(), w.len())));
        }
        if !t.is_finite() || !all_finite(&u) || !all_finite(&w) {
            return Err(Error::InvalidInput("non-finite field state".into()));
        }
        Ok(Self { t, u, w })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Largest nodewise difference in `u` and `w` against another state.
    pub fn max_difference(&self, other: &Self) -> T {
        self.u
            .iter()
            .zip(&other.u)
            .chain(self.w.iter().zip(&other.w))
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}
