//! Exact pointwise calculus: residual operators for the membrane, string,
//! profile and similarity-frame equations, the explicit solutions and their
//! jets, and the coordinate maps relating the frames.

mod explicit;
mod field;
mod jet;
mod residual;

pub use explicit::{
    axis_second_derivative, collapse_time, explicit_profile, explicit_solution_jet, lightcone_contains,
    ExplicitSolution, LightconePoint,
};
pub use field::{
    from_similarity, scaling_transform, similarity_field, to_similarity, Field, JetField, Scaled,
    SimilarityView,
};
pub use jet::{Branch, Evaluation, ProfileJet, SecondOrderJet};
pub use residual::{
    born_infeld_residual, hyperbolicity_monitor, membrane_residual, membrane_residual_scale, ode_residual,
    ode_residual_regrouped, similarity_hyperbolicity, similarity_residual,
};
pub(crate) use residual::{ode_lower_order, similarity_remainder};
