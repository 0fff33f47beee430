//! Numerical experiments on finite-time blow-up of the radial membrane
//! equation, the zero mean curvature equation for a graph over Minkowski
//! space.
//!
//! The crate is generic over the floating point type through [`Real`]; the
//! aliases at the crate root fix it to `f64`, the working precision used by
//! the command-line front end.

pub mod equations;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod mol;
pub mod scalar;
pub mod selfsimilar_ode;
pub mod similarity_evolution;
pub mod spectral;
pub mod stencil;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Jet = equations::SecondOrderJet<f64>;
pub type Profile = equations::ProfileJet<f64>;
pub type Explicit = equations::ExplicitSolution<f64>;
