//! Rank-2 bundles on ℙ¹: Laurent transition matrices, splitting types and
//! the normal-bundle sequence of the resolution tower.

pub mod laurent;
pub mod splitting;

pub use laurent::{LaurentPoly, TransitionMatrix};
pub use splitting::{
    linearize_along_curve, local_model_transition, normal_bundle_sequence, section_degree_bound, section_dim, splitting_type, SplittingType,
    PROFILE_WINDOW,
};
