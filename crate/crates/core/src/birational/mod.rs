//! Charts, blow-ups, strict transforms and the resolution tower.

pub mod blowup;
pub mod chart;
pub mod square;
pub mod tower;

pub use blowup::{
    center_strict_transform, codim2_blowup_charts, coordinate_blowup_chart, point_blowup_charts, straighten_center,
    strict_transform, strict_transform_in, BlowupChart, BlowupKind, BlowupStep, Hypersurface, Overlap, Straightening,
    SurfaceCenter,
};
pub use chart::{compose_maps, first_mismatch, maps_equal, Chart, ChartLevel, MonomialDenominatorMap, SubstitutionMap};
pub use square::{verify_lemma_square, verify_lemma_square_with_center};
pub use tower::{build_tower, ExceptionalCurve, Tower, TowerCheck, TowerLevel, TOWER_SCHEMA};
