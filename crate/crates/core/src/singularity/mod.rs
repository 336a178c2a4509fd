//! Singular-locus certificates, the perturbed hypersurface and real-slice
//! bounds.

pub mod certify;
pub mod perturb;
pub mod loci;
pub mod real_slice;

pub use certify::{branch_tree, certify_singular_locus, CriticalSystem};
pub use perturb::{
    certify_perturbation, default_eps_candidates, expected_points, search_perturbation, PerturbationParams, SearchAttempt,
    SearchOutcome,
};
pub use loci::{certify_tower_loci, LocusCheck};
pub use real_slice::{cone_unbounded_witness, real_slice_bound, sample_real_slice, RealSliceBound, SliceSampleReport};
