//! Exact symbolic toolkit for a family of 1-convex threefolds.
//!
//! The crate builds the explicit blow-up charts and the `k`-step resolution
//! tower of the hypersurface `z1² + z2² + z3² − z4^{2k} = 0`, certifies
//! singular loci (including a perturbed family) with exact branch/resultant
//! arguments, computes splitting types of rank-2 bundles on ℙ¹ from
//! Laurent transition matrices, and checks the real-geometry ingredients:
//! real points on the rulings of a quadric and boundedness of a real slice.
//!
//! All arithmetic is exact over the Gaussian rationals ℚ(i).

pub mod algebra;
pub mod birational;
pub mod bundle;
pub mod certificate;
pub mod error;
pub mod quadric;
pub mod singularity;

pub use algebra::{parse_poly, GaussianRational, MultiPoly, UniPolyView};
pub use birational::{build_tower, verify_lemma_square, Chart, Hypersurface, SubstitutionMap, SurfaceCenter, Tower};
pub use bundle::{normal_bundle_sequence, splitting_type, LaurentPoly, SplittingType, TransitionMatrix};
pub use certificate::{Certificate, Status};
pub use error::{Error, Result};
pub use quadric::{real_point, ruling_line, verify_boundary_cover, Family, ProjLine, ProjPoint, RulingParam};
pub use singularity::{certify_perturbation, certify_singular_locus, search_perturbation, PerturbationParams};
