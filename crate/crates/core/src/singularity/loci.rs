//! Singular-locus certificates for every level of a resolution tower.

use num_traits::Zero;

use super::certify::certify_singular_locus;
use crate::algebra::GaussianRational;
use crate::birational::{strict_transform, Tower};
use crate::certificate::{Certificate, Status};
use crate::error::Result;

/// One hypersurface of the tower with its expected and certified status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusCheck {
    pub name: String,
    pub expected: Status,
    pub certificate: Certificate,
}

impl LocusCheck {
    pub fn passed(&self) -> bool {
        self.certificate.status == self.expected
    }
}

/// `Y_j` for `j = k..1` is singular only at the origin of its chart, `Y_0`
/// is smooth, and the strict transforms of `Y_j` in the three charts of
/// `g_j` other than the tracked one are smooth.
pub fn certify_tower_loci(tower: &Tower) -> Result<Vec<LocusCheck>> {
    let mut out = Vec::new();
    for level in &tower.levels {
        let j = level.j;
        if j == 0 {
            let certificate = certify_singular_locus(&level.y, &[])?;
            out.push(LocusCheck { name: format!("Y_0 in {}", level.chart.id), expected: Status::Smooth, certificate });
            continue;
        }
        let origin = vec![GaussianRational::zero(); level.chart.dim()];
        let certificate = certify_singular_locus(&level.y, std::slice::from_ref(&origin))?;
        out.push(LocusCheck { name: format!("Y_{j} in {}", level.chart.id), expected: Status::OnlySingularAt(vec![origin]), certificate });
        let g = level.g_step.as_ref().expect("levels j >= 1 carry g");
        for idx in 0..3 {
            let (h, _) = strict_transform(&level.y, g, idx)?;
            let certificate = certify_singular_locus(&h, &[])?;
            out.push(LocusCheck { name: format!("Y_{j} strict transform in {}", g.charts[idx].chart.id), expected: Status::Smooth, certificate });
        }
    }
    Ok(out)
}
