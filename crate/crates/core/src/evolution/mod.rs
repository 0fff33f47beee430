//! Physical-frame evolution of the radial membrane equation and its planar
//! string analogue, with blow-up time fitting.

mod blowup;
mod grid;
mod physics;
mod solver;

pub use blowup::{detect_blowup, BlowupFit, MIN_BLOWUP_SAMPLES};
pub use grid::{FieldState, Geometry, RadialGrid};
pub use physics::{
    axis_acceleration, hyperbolicity, interior_acceleration, max_characteristic_speed, planar_acceleration,
};
pub use solver::{evolve, Evolution, EvolveControls, EvolveTermination, MembraneSystem, MonitorSample};
