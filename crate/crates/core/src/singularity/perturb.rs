//! The perturbed hypersurface
//! `z1² + z2² + z3² − z4^{2k} + ε(z1^{2N} + z2^{2N} + z3^{2N} + z4^{2N}) = 0`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::certify::certify_singular_locus;
use crate::algebra::gaussian::fmt_rational;
use crate::algebra::{var_names, GaussianRational, MultiPoly};
use crate::birational::{Chart, ChartLevel, Hypersurface};
use crate::certificate::{Certificate, LeafKind, Status};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationParams {
    pub k: u32,
    pub n: u32,
    pub eps: BigRational,
}

impl PerturbationParams {
    /// Checks `k ≥ 1`, `N > k` and `0 < ε ≤ 1`.
    pub fn new(k: u32, n: u32, eps: BigRational) -> Result<Self> {
        if k < 1 {
            return Err(Error::Validation(format!("k must be at least 1, got {k}")));
        }
        if n <= k {
            return Err(Error::Validation(format!("N must exceed k (N = {n}, k = {k})")));
        }
        if !eps.is_positive() || eps > BigRational::one() {
            return Err(Error::Validation(format!("eps must lie in (0, 1], got {}", fmt_rational(&eps))));
        }
        Ok(PerturbationParams { k, n, eps })
    }

    pub fn eps_string(&self) -> String {
        fmt_rational(&self.eps)
    }

    pub fn chart(&self) -> Chart {
        Chart::new("Y~", var_names(&["z1", "z2", "z3", "z4"]), ChartLevel::Level(self.k)).expect("valid chart")
    }

    pub fn equation(&self) -> MultiPoly {
        let chart = self.chart();
        let base = chart.parse(&format!("z1^2 + z2^2 + z3^2 - z4^{}", 2 * self.k)).expect("valid");
        let n2 = 2 * self.n;
        let pert = chart.parse(&format!("z1^{n2} + z2^{n2} + z3^{n2} + z4^{n2}")).expect("valid");
        &base + &pert.scale(&GaussianRational::from_real(self.eps.clone()))
    }

    pub fn hypersurface(&self) -> Hypersurface {
        Hypersurface::new(self.chart(), self.equation()).expect("nonzero")
    }
}

impl fmt::Display for PerturbationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}, N={}, eps={}", self.k, self.n, self.eps_string())
    }
}

/// Certifies that the origin is the only singular point of the perturbed
/// hypersurface. Success is reported as CERTIFIED.
pub fn certify_perturbation(params: &PerturbationParams) -> Result<Certificate> {
    let params = PerturbationParams::new(params.k, params.n, params.eps.clone())?;
    let h = params.hypersurface();
    let origin = vec![GaussianRational::zero(); 4];
    let inner = certify_singular_locus(&h, &[origin])?;
    let mut cert = Certificate::new("perturb", Status::Inconclusive)
        .param("k", params.k)
        .param("N", params.n)
        .param("eps", params.eps_string())
        .param("equation", &h.equation);
    cert.status = if inner.status.is_success() { Status::Certified } else { inner.status.clone() };
    cert.values = inner.values;
    cert.branches = inner.branches;
    cert.justification = inner.justification;
    cert.justify(format!(
        "df/dzj = 2 zj (1 + N eps zj^(2N-2)) for j <= 3 and df/dz4 = 2 z4^(2k-1) (N eps z4^(2N-2k) - k) split into 2 branches per variable; expected {} candidate points",
        expected_points(&params)
    ));
    Ok(cert)
}

/// `(1 + (2N − 2))³ · (1 + (2N − 2k))`.
pub fn expected_points(params: &PerturbationParams) -> u64 {
    let a = 1 + 2 * params.n as u64 - 2;
    let b = 1 + 2 * params.n as u64 - 2 * params.k as u64;
    a * a * a * b
}

pub fn default_eps_candidates() -> Vec<BigRational> {
    [(1, 1), (1, 2), (1, 4)].iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect()
}

/// One attempted `(N, ε)` pair of a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchAttempt {
    pub params: PerturbationParams,
    pub status: Status,
    pub witness_leaves: usize,
    pub unresolved_leaves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub params: PerturbationParams,
    pub certificate: Certificate,
    pub attempts: Vec<SearchAttempt>,
}

/// Scans `N = k+1..=n_max` crossed with `eps_candidates` (in order) and
/// returns the first CERTIFIED pair.
pub fn search_perturbation(k: u32, n_max: u32, eps_candidates: &[BigRational]) -> Result<SearchOutcome> {
    if k < 1 {
        return Err(Error::Validation(format!("k must be at least 1, got {k}")));
    }
    if n_max <= k {
        return Err(Error::Validation(format!("N_max must exceed k (N_max = {n_max}, k = {k})")));
    }
    if eps_candidates.is_empty() {
        return Err(Error::Validation("eps candidate list is empty".into()));
    }
    let mut attempts = Vec::new();
    for n in k + 1..=n_max {
        for eps in eps_candidates {
            let params = PerturbationParams::new(k, n, eps.clone())?;
            let cert = certify_perturbation(&params)?;
            let leaves = cert.leaves();
            let count = |kind: LeafKind| leaves.iter().filter(|(_, o)| o.kind == kind).count();
            let attempt = SearchAttempt {
                params: params.clone(),
                status: cert.status.clone(),
                witness_leaves: count(LeafKind::SingularWitness),
                unresolved_leaves: count(LeafKind::Unresolved),
            };
            drop(leaves);
            attempts.push(attempt);
            if cert.status == Status::Certified {
                let mut certificate = cert;
                certificate.command = "perturb-search".into();
                certificate.params.insert("N_max".into(), n_max.to_string());
                let tried: Vec<String> = attempts.iter().map(|a| format!("({}, {}) {}", a.params.n, a.params.eps_string(), a.status)).collect();
                certificate.value("attempts", tried.join("; "));
                return Ok(SearchOutcome { params, certificate, attempts });
            }
        }
    }
    let summary: Vec<String> = attempts
        .iter()
        .map(|a| format!("N={} eps={}: {} ({} witness, {} unresolved leaves)", a.params.n, a.params.eps_string(), a.status, a.witness_leaves, a.unresolved_leaves))
        .collect();
    Err(Error::NotFound(summary.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn validation() {
        assert!(matches!(PerturbationParams::new(1, 1, q(1, 1)), Err(Error::Validation(_))));
        assert!(matches!(PerturbationParams::new(0, 2, q(1, 1)), Err(Error::Validation(_))));
        assert!(matches!(PerturbationParams::new(1, 2, q(0, 1)), Err(Error::Validation(_))));
        assert!(matches!(PerturbationParams::new(1, 2, q(3, 2)), Err(Error::Validation(_))));
        assert!(PerturbationParams::new(1, 2, q(1, 1)).is_ok());
    }

    #[test]
    fn equation_and_partials() {
        let p = PerturbationParams::new(1, 2, q(1, 1)).unwrap();
        let f = p.equation();
        assert_eq!(f.to_string(), "z1^4 + z2^4 + z3^4 + z4^4 + z1^2 + z2^2 + z3^2 - z4^2");
        let c = p.chart();
        assert_eq!(f.differentiate("z1").unwrap(), c.parse("2*z1 + 4*z1^3").unwrap());
    }

    #[test]
    fn k1_n2_certified_with_point_count() {
        let p = PerturbationParams::new(1, 2, q(1, 1)).unwrap();
        let c = certify_perturbation(&p).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert_eq!(c.values["points"], expected_points(&p).to_string());
        assert_eq!(c.values["leaves"], "16");
    }

    #[test]
    fn k1_n3_fails() {
        // N odd: z1^2 = i/√3-type roots cancel against z2.
        let p = PerturbationParams::new(1, 3, q(1, 1)).unwrap();
        assert_eq!(certify_perturbation(&p).unwrap().status, Status::Fail);
    }

    #[test]
    fn search_errors() {
        assert!(matches!(search_perturbation(1, 9, &[]), Err(Error::Validation(_))));
        assert!(matches!(search_perturbation(2, 2, &default_eps_candidates()), Err(Error::Validation(_))));
        let e = search_perturbation(1, 1 + 2, &[q(1, 1)]);
        assert!(e.is_ok());
    }
}
