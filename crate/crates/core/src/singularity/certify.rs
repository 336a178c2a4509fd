//! Singular-locus certificates by branch substitution and iterated
//! resultants (Jacobian criterion).

use num_integer::gcd;
use num_traits::Zero;

use crate::algebra::univariate::{dense_eval, dense_gcd};
use crate::algebra::{resultant_in, GaussianRational, MultiPoly};
use crate::birational::Hypersurface;
use crate::certificate::{BranchConstraint, BranchNode, Certificate, LeafKind, LeafOutcome, Status};
use crate::error::{Error, Result};

/// `f` together with its partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSystem {
    pub hypersurface: Hypersurface,
    pub partials: Vec<MultiPoly>,
}

impl CriticalSystem {
    pub fn new(h: &Hypersurface) -> Result<Self> {
        let partials = h.chart.variables.iter().map(|v| h.equation.differentiate(v)).collect::<Result<_>>()?;
        Ok(CriticalSystem { hypersurface: h.clone(), partials })
    }

    /// Partials first (in variable order), then `f`.
    pub fn equations(&self) -> Vec<MultiPoly> {
        let mut out = self.partials.clone();
        out.push(self.hypersurface.equation.clone());
        out
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.hypersurface.chart.variables.iter().map(|v| format!("df/d{v}")).collect();
        out.push("f".into());
        out
    }

    pub fn vanishes_at(&self, point: &[GaussianRational]) -> bool {
        self.equations().iter().all(|e| e.evaluate(point).is_zero())
    }
}

/// Per-variable constraint: zero, or a root of a univariate polynomial with
/// nonzero constant term (dense ascending coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
enum Con {
    Zero,
    Root(Vec<GaussianRational>),
}

impl Con {
    fn degree(&self) -> u64 {
        match self {
            Con::Zero => 1,
            Con::Root(g) => (g.len() - 1) as u64,
        }
    }

    /// The unique value when the constraint pins it down rationally.
    fn explicit_value(&self) -> Option<GaussianRational> {
        match self {
            Con::Zero => Some(GaussianRational::zero()),
            Con::Root(g) if g.len() == 2 => Some(-(&g[0] / &g[1])),
            Con::Root(_) => None,
        }
    }

    fn holds_at(&self, x: &GaussianRational) -> bool {
        match self {
            Con::Zero => x.is_zero(),
            Con::Root(g) => dense_eval(g, x).is_zero(),
        }
    }
}

struct Engine<'a> {
    vars: &'a [String],
    labels: Vec<String>,
    system: Vec<MultiPoly>,
    claimed: &'a [Vec<GaussianRational>],
}

impl Engine<'_> {
    fn reduce(&self, p: &MultiPoly, cons: &[Option<Con>]) -> MultiPoly {
        let mut out = p.clone();
        for (i, c) in cons.iter().enumerate() {
            match c {
                Some(Con::Zero) => out = out.specialize(i, &GaussianRational::zero()),
                Some(Con::Root(g)) => out = out.reduce_univariate(i, g),
                None => {}
            }
        }
        out
    }

    fn constraint_record(&self, v: usize, c: &Con) -> BranchConstraint {
        match c {
            Con::Zero => BranchConstraint::zero(&self.vars[v]),
            Con::Root(g) => BranchConstraint::root_of(&self.vars[v], MultiPoly::from_univariate(self.vars, v, g)),
        }
    }

    /// Branches covering the zero set of `p = c · monomial · u(x)` inside the
    /// current constraints, or `None` if `p` has no such factorisation.
    fn split(&self, p: &MultiPoly, cons: &[Option<Con>]) -> Option<Vec<(usize, Con)>> {
        let content = p.monomial_content();
        let rest = p.div_monomial(&content);
        let mut out = Vec::new();
        for (v, &e) in content.0.iter().enumerate() {
            // Root constraints have nonzero constant term, so v = 0 is impossible there.
            if e > 0 && cons[v].is_none() {
                out.push((v, Con::Zero));
            }
        }
        match rest.support().as_slice() {
            [] => {}
            &[x] => {
                let u = rest.univariate_coeffs(x).expect("single-variable support");
                match &cons[x] {
                    None => out.push((x, Con::Root(u))),
                    Some(Con::Root(g)) => {
                        let d = dense_gcd(g, &u);
                        if d.len() >= 2 {
                            out.push((x, Con::Root(d)));
                        }
                    }
                    Some(Con::Zero) => {}
                }
            }
            _ => return None,
        }
        (!out.is_empty()).then_some(out)
    }

    fn solve(&self, cons: &mut Vec<Option<Con>>) -> Result<BranchNode> {
        let reduced: Vec<MultiPoly> = self.system.iter().map(|p| self.reduce(p, cons)).collect();
        let points: u64 = cons.iter().flatten().map(Con::degree).product();
        let leaf = |outcome| BranchNode { constraint: None, split_on: None, outcome: Some(outcome), children: Vec::new() };

        if let Some((i, p)) = reduced.iter().enumerate().find(|(_, p)| p.is_constant() && !p.is_zero()) {
            return Ok(leaf(LeafOutcome {
                kind: LeafKind::Contradiction,
                value: Some(p.to_string()),
                detail: format!("{} reduces to a nonzero constant", self.labels[i]),
                points,
            }));
        }
        for p in reduced.iter().filter(|p| !p.is_zero()) {
            let Some(branches) = self.split(p, cons) else { continue };
            let mut children = Vec::with_capacity(branches.len());
            for (v, c) in branches {
                let saved = cons[v].replace(c.clone());
                let mut child = self.solve(cons)?;
                cons[v] = saved;
                child.constraint = Some(self.constraint_record(v, &c));
                children.push(child);
            }
            return Ok(BranchNode { constraint: None, split_on: Some(p.clone()), outcome: None, children });
        }
        Ok(leaf(self.close(&reduced, cons, points)?))
    }

    fn compatible_claims(&self, cons: &[Option<Con>]) -> Vec<&Vec<GaussianRational>> {
        self.claimed
            .iter()
            .filter(|p| cons.iter().zip(p.iter()).all(|(c, x)| c.as_ref().is_none_or(|c| c.holds_at(x))))
            .collect()
    }

    fn close(&self, reduced: &[MultiPoly], cons: &[Option<Con>], points: u64) -> Result<LeafOutcome> {
        let nonzero: Vec<usize> = (0..reduced.len()).filter(|&i| !reduced[i].is_zero()).collect();
        let claims = self.compatible_claims(cons);
        if nonzero.is_empty() {
            let explicit: Option<Vec<GaussianRational>> =
                cons.iter().map(|c| c.as_ref().and_then(Con::explicit_value)).collect();
            return Ok(match explicit {
                Some(pt) if claims.iter().any(|c| **c == pt) => LeafOutcome {
                    kind: LeafKind::Claimed,
                    value: Some("0".into()),
                    detail: format!("claimed point {} satisfies the whole system", fmt_point(&pt)),
                    points,
                },
                Some(pt) => LeafOutcome {
                    kind: LeafKind::SingularWitness,
                    value: Some("0".into()),
                    detail: format!("unclaimed singular point {}", fmt_point(&pt)),
                    points,
                },
                None if claims.is_empty() => LeafOutcome {
                    kind: LeafKind::SingularWitness,
                    value: Some("0".into()),
                    detail: "every equation vanishes on the branch".into(),
                    points,
                },
                None => LeafOutcome {
                    kind: LeafKind::Unresolved,
                    value: None,
                    detail: "system vanishes on a branch containing a claimed point".into(),
                    points,
                },
            });
        }

        let mut zero_closed = Vec::new();
        for &i in &nonzero {
            let p = &reduced[i];
            let closed = p.support().iter().all(|&v| matches!(cons[v], Some(Con::Root(_))));
            if !closed {
                continue;
            }
            let r = self.iterated_resultant(p, cons)?;
            if !r.is_zero() {
                return Ok(LeafOutcome {
                    kind: LeafKind::ResultantNonzero,
                    value: Some(r.to_string()),
                    detail: format!("iterated resultant of {} against the root constraints", self.labels[i]),
                    points,
                });
            }
            zero_closed.push(i);
        }
        if nonzero.len() == 1 && zero_closed == nonzero && claims.is_empty() {
            return Ok(LeafOutcome {
                kind: LeafKind::SingularWitness,
                value: Some("0".into()),
                detail: format!(
                    "{} vanishes at a root of the branch constraints while every other equation reduces to 0",
                    self.labels[nonzero[0]]
                ),
                points,
            });
        }
        let names: Vec<&str> = nonzero.iter().map(|&i| self.labels[i].as_str()).collect();
        Ok(LeafOutcome { kind: LeafKind::Unresolved, value: None, detail: format!("unresolved: {}", names.join(", ")), points })
    }

    /// Eliminates every constrained variable of `p` by resultants against its
    /// root polynomial, reducing after each step. The result is a constant
    /// that vanishes iff `p` vanishes at some root tuple. Exponents common to
    /// `p` and the root polynomial are divided out first
    /// (`Res_x(g(x^e), P(x^e)) = Res_w(g, P)^e`).
    fn iterated_resultant(&self, p: &MultiPoly, cons: &[Option<Con>]) -> Result<MultiPoly> {
        let mut cur = p.clone();
        while let Some(v) = cur.support().first().copied() {
            let Some(Con::Root(g)) = &cons[v] else {
                return Err(Error::InternalInconsistent(format!("{} is not root-constrained", self.vars[v])));
            };
            let mut e = 0u32;
            for (m, _) in cur.terms() {
                e = gcd(e, m.0[v]);
            }
            for (k, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    e = gcd(e, k as u32);
                }
            }
            let (pc, gc) = if e > 1 { (compress(&cur, v, e), g.iter().step_by(e as usize).cloned().collect()) } else { (cur.clone(), g.clone()) };
            let gp = MultiPoly::from_univariate(self.vars, v, &gc);
            let r = resultant_in(&gp, &pc, &self.vars[v])?.embed(self.vars)?;
            cur = self.reduce(&r, cons);
            if cur.is_zero() {
                break;
            }
        }
        Ok(cur)
    }
}

fn compress(p: &MultiPoly, v: usize, e: u32) -> MultiPoly {
    MultiPoly::from_terms(
        p.variables(),
        p.terms().map(|(m, c)| {
            let mut x = m.0.clone();
            x[v] /= e;
            (x, c.clone())
        }),
    )
}

fn fmt_point(p: &[GaussianRational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Branch tree of the critical system of `h`; the root node carries no
/// constraint.
pub fn branch_tree(h: &Hypersurface, claimed: &[Vec<GaussianRational>]) -> Result<BranchNode> {
    let sys = CriticalSystem::new(h)?;
    let engine = Engine { vars: &h.chart.variables, labels: sys.labels(), system: sys.equations(), claimed };
    let mut cons = vec![None; h.chart.dim()];
    engine.solve(&mut cons)
}

/// Certifies that the singular points of `h` are exactly `claimed`.
///
/// Status is SMOOTH (nothing claimed) or ONLY_SINGULAR_AT(claimed) when every
/// unclaimed branch is refuted, FAIL on a witness or a claimed point that is
/// not singular, and INCONCLUSIVE otherwise.
pub fn certify_singular_locus(h: &Hypersurface, claimed: &[Vec<GaussianRational>]) -> Result<Certificate> {
    let sys = CriticalSystem::new(h)?;
    for p in claimed {
        if p.len() != h.chart.dim() {
            return Err(Error::Validation(format!("claimed point {} has the wrong dimension", fmt_point(p))));
        }
    }
    let mut cert = Certificate::new("certify", Status::Inconclusive)
        .param("chart", &h.chart)
        .param("equation", &h.equation)
        .param("claimed", claimed.iter().map(|p| fmt_point(p)).collect::<Vec<_>>().join(", "));
    cert.justify("Jacobian criterion: singular points are the common zeros of f and all partial derivatives");
    cert.justify("each split covers the zero set of a partial factored as monomial x univariate polynomial");

    let tree = branch_tree(h, claimed)?;
    cert.branches.push(tree);
    let leaves = cert.leaves();
    let count = |k: LeafKind| leaves.iter().filter(|(_, o)| o.kind == k).count();
    let witnesses = count(LeafKind::SingularWitness);
    let unresolved = count(LeafKind::Unresolved);
    let total_points: u64 = leaves.iter().map(|(_, o)| o.points).sum();
    let mut values = vec![
        ("leaves".to_string(), leaves.len().to_string()),
        ("points".to_string(), total_points.to_string()),
        ("contradiction_leaves".to_string(), count(LeafKind::Contradiction).to_string()),
        ("resultant_leaves".to_string(), count(LeafKind::ResultantNonzero).to_string()),
        ("claimed_leaves".to_string(), count(LeafKind::Claimed).to_string()),
        ("witness_leaves".to_string(), witnesses.to_string()),
        ("unresolved_leaves".to_string(), unresolved.to_string()),
    ];
    let bad_claims: Vec<String> = claimed.iter().filter(|p| !sys.vanishes_at(p)).map(|p| fmt_point(p)).collect();
    drop(leaves);
    for (k, v) in values.drain(..) {
        cert.value(k, v);
    }

    cert.status = if !bad_claims.is_empty() {
        cert.justify(format!("claimed points are not singular: {}", bad_claims.join(", ")));
        Status::Fail
    } else if witnesses > 0 {
        cert.justify("a branch contains a singular point outside the claimed set");
        Status::Fail
    } else if unresolved > 0 {
        Status::Inconclusive
    } else if claimed.is_empty() {
        Status::Smooth
    } else {
        Status::OnlySingularAt(claimed.to_vec())
    };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var_names;
    use crate::birational::{Chart, ChartLevel};

    fn hyper(vars: &[&str], eq: &str) -> Hypersurface {
        let c = Chart::new("C", var_names(vars), ChartLevel::LocalModel).unwrap();
        Hypersurface::parse(&c, eq).unwrap()
    }

    fn origin(n: usize) -> Vec<GaussianRational> {
        vec![GaussianRational::zero(); n]
    }

    #[test]
    fn y0_is_smooth() {
        let h = hyper(&["u1", "u2", "u3", "u4"], "u1^2 + u2^2 + u3^2 - 1");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Smooth);
    }

    #[test]
    fn y2_only_singular_at_origin() {
        let h = hyper(&["z1", "z2", "z3", "z4"], "z1^2 + z2^2 + z3^2 - z4^4");
        let c = certify_singular_locus(&h, &[origin(4)]).unwrap();
        assert_eq!(c.status, Status::OnlySingularAt(vec![origin(4)]));
        assert_eq!(c.status.to_string(), "ONLY_SINGULAR_AT[(0, 0, 0, 0)]");
        // Without the claim the origin is a witness.
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn off_chart_transform_is_smooth() {
        let h = hyper(&["u1", "u2", "u3", "u4"], "1 + u2^2 + u3^2 - u1^2*u4^4");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Smooth, "{}", c.to_json());
    }

    #[test]
    fn false_claim_fails() {
        let h = hyper(&["x", "y"], "x^2 + y^2 - 1");
        let c = certify_singular_locus(&h, &[origin(2)]).unwrap();
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn nonseparable_partials_are_inconclusive() {
        // Partials x + y^2 and 2xy + 1 admit no monomial x univariate split.
        let h = hyper(&["x", "y"], "1/2*x^2 + x*y^2 + y");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Inconclusive);
    }

    #[test]
    fn root_branch_with_nonzero_resultant() {
        // Critical points x^2 = -1/2 (plus x = 0); f = x^2 + x^4 + y^2 + 1
        // is 3/4 there and 1 at x = 0.
        let h = hyper(&["x", "y"], "x^2 + x^4 + y^2 + 1");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Smooth);
        assert_eq!(c.values["points"], "3");
    }

    #[test]
    fn curve_of_singularities_is_a_witness() {
        let h = hyper(&["x", "y"], "x^2");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn witness_from_vanishing_resultant() {
        // Critical points x^2 = 1 and y^2 = -1: f = (x^2 - 1)^2 + (y^2 + 1)^2 - 0 vanishes there.
        let h = hyper(&["x", "y"], "x^4 - 2*x^2 + y^4 + 2*y^2 + 2");
        let c = certify_singular_locus(&h, &[]).unwrap();
        assert_eq!(c.status, Status::Fail, "{}", c.to_json());
    }
}
