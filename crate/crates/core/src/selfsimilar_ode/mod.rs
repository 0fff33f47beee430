//! Self-similar profiles `u = (T - t) phi(r / (T - t))`: regular series at
//! the axis, adaptive integration of the profile equation and checks on the
//! resulting trajectories.

mod diagnostics;
mod integrate;
mod series;

pub use diagnostics::{finite_difference_residual, parity_check, ParityReport};
pub use integrate::{integrate_ivp, integrate_profile, ProfileControls, ProfileSolution, Termination};
pub use series::{leading_balance, taylor_eval, LeadingBalance, TaylorSeed, MAX_SEED_ORDER};
