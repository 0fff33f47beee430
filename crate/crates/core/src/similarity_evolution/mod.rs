//! The membrane equation in similarity coordinates: nonlinear evolution
//! about the explicit profiles, perturbed initial data, and the
//! linearization with its reduced constant-coefficient form.

mod linear;
mod solver;
mod state;

pub use linear::{
    linearized_coefficients, linearized_coefficients_at, reduced_linear_solution, LinearizedCoefficients,
};
pub use solver::{
    evolve_similarity, similarity_acceleration, similarity_characteristic_speed, NormSample,
    SimilarityControls, SimilarityEvolution, SimilaritySystem,
};
pub use state::{
    explicit_profile_samples, perturbed_initial_data, Bump, SimilarityGrid, SimilarityState, MAX_EPSILON,
};
