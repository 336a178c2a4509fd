//! Dispatch of subcommands to the library.

use num_rational::BigRational as Q;
use threefold::algebra::gaussian::parse_rational;
use threefold::bundle::{linearize_along_curve, local_model_transition, normal_bundle_sequence, section_dim, splitting_type, SplittingType, TransitionMatrix, PROFILE_WINDOW};
use threefold::certificate::{Certificate, LeafKind, Status};
use threefold::quadric::{verify_boundary_cover, verify_ruling_cover, QuadricModel};
use threefold::singularity::{
    certify_perturbation, certify_tower_loci, cone_unbounded_witness, default_eps_candidates, real_slice_bound, sample_real_slice, search_perturbation,
    PerturbationParams,
};
use threefold::{build_tower, verify_lemma_square, Error, Result};

use crate::report::{CheckStatus, Report};
use crate::Command;

/// 2 for input and usage errors, 3 for internal failures.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::UnknownVariable(_) | Error::Validation(_) | Error::NotCocycle(_) | Error::ZeroPolynomial(_) => 2,
        _ => 3,
    }
}

fn rational(s: &str) -> Result<Q> {
    parse_rational(s.trim()).ok_or_else(|| Error::Validation(format!("`{s}` is not a rational number a/b")))
}

fn status_of(cert: &Certificate, expected: impl Fn(&Status) -> bool) -> CheckStatus {
    if expected(&cert.status) {
        CheckStatus::Pass
    } else if cert.status == Status::Inconclusive {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Fail
    }
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Tower { k } => tower(*k),
        Command::Certify { k } => certify(*k),
        Command::Perturb { k, n, eps } => perturb(*k, *n, &rational(eps)?),
        Command::PerturbSearch { k, n_max, eps } => {
            let cands = eps.split(',').map(rational).collect::<Result<Vec<_>>>()?;
            perturb_search(*k, n_max.unwrap_or(k + 8), &cands)
        }
        Command::NormalBundles { k } => normal_bundles(*k),
        Command::Splitting { matrix } => splitting(matrix),
        Command::Quadric { trials, seed, k } => quadric(*k, *trials, *seed),
        Command::RealSlice { k, n, eps, samples, seed } => real_slice(*k, *n, &rational(eps)?, *samples, *seed),
        Command::SquareCheck => Ok(square_check()),
        Command::All { k, trials, samples, seed } => all(*k, *trials, *samples, *seed),
    }
}

fn tower(k: u32) -> Result<Report> {
    let t = build_tower(k)?;
    let mut r = Report::new("tower");
    r.param("k", k);
    for c in &t.checks {
        r.check(format!("level {} {}", c.level, c.name), c.passed, &c.detail);
    }
    r.details.push(t.to_json_value());
    Ok(r)
}

fn certify(k: u32) -> Result<Report> {
    let t = build_tower(k)?;
    let mut r = Report::new("certify");
    r.param("k", k);
    for c in certify_tower_loci(&t)? {
        let witness = format!("{} ({} leaves, {} points)", c.certificate.status, c.certificate.values["leaves"], c.certificate.values["points"]);
        let status = status_of(&c.certificate, |s| s == &c.expected);
        let unresolved = c.certificate.values["unresolved_leaves"] != "0";
        r.push(&c.name, if unresolved && status == CheckStatus::Pass { CheckStatus::Inconclusive } else { status }, witness);
        r.detail(&c.certificate);
    }
    Ok(r)
}

fn perturb(k: u32, n: u32, eps: &Q) -> Result<Report> {
    let p = PerturbationParams::new(k, n, eps.clone())?;
    let cert = certify_perturbation(&p)?;
    let mut r = Report::new("perturb");
    r.param("k", k);
    r.param("N", n);
    r.param("eps", p.eps_string());
    r.push("origin is the only singular point", status_of(&cert, |s| s == &Status::Certified), cert.status.to_string());
    for (i, (path, leaf)) in cert.leaves().iter().enumerate() {
        let path: Vec<String> = path.iter().map(ToString::to_string).collect();
        let ok = matches!(leaf.kind, LeafKind::Contradiction | LeafKind::ResultantNonzero | LeafKind::Claimed);
        let value = leaf.value.as_deref().unwrap_or("-");
        r.check(format!("leaf {:02} [{}]", i + 1, path.join("; ")), ok, format!("f = {value} ({:?})", leaf.kind));
    }
    r.detail(&cert);
    Ok(r)
}

fn perturb_search(k: u32, n_max: u32, eps: &[Q]) -> Result<Report> {
    let mut r = Report::new("perturb-search");
    r.param("k", k);
    r.param("N_max", n_max);
    r.param("eps", eps.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    match search_perturbation(k, n_max, eps) {
        Ok(out) => {
            for a in &out.attempts {
                let tried = format!("N={} eps={}", a.params.n, a.params.eps_string());
                r.push(format!("attempt {tried}"), CheckStatus::Pass, format!("{} ({} witness leaves)", a.status, a.witness_leaves));
            }
            r.check("certified pair found", true, out.params.to_string());
            r.detail(&out.certificate);
        }
        Err(Error::NotFound(msg)) => r.check("certified pair found", false, msg),
        Err(e) => return Err(e),
    }
    Ok(r)
}

/// Theorem sequence: `(0, −2)` for `j ≥ 2`, `(−1, −1)` for `j = 1`.
fn expected_type(j: u32) -> SplittingType {
    if j == 1 {
        SplittingType::new(-1, -1)
    } else {
        SplittingType::new(0, -2)
    }
}

fn normal_bundles(k: u32) -> Result<Report> {
    let seq = normal_bundle_sequence(k)?;
    let mut r = Report::new("normal-bundles");
    r.param("k", k);
    for (ty, j) in seq.iter().zip((1..=k).rev()) {
        let [y1, y2] = local_model_transition(j)?;
        let t = linearize_along_curve(&y1, &y2)?;
        r.check(format!("N(C_{j})"), *ty == expected_type(j), format!("{ty} from transition {t}"));
    }
    let s: Vec<String> = seq.iter().map(ToString::to_string).collect();
    r.check("sequence", (1..=k).rev().map(expected_type).eq(seq.iter().copied()), s.join(", "));
    Ok(r)
}

fn splitting(path: &std::path::Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    let rows: [[String; 2]; 2] = serde_json::from_str(&text).map_err(|e| Error::Validation(format!("matrix must be a 2x2 JSON array of strings: {e}")))?;
    let t = TransitionMatrix::parse([[&rows[0][0], &rows[0][1]], [&rows[1][0], &rows[1][1]]])?;
    let (c, v) = t.det_valuation()?;
    let ty = splitting_type(&t)?;
    let mut r = Report::new("splitting");
    r.param("matrix", &t);
    r.check("cocycle", true, format!("det = {c} z^{v}"));
    r.check("splitting type", ty.d1 + ty.d2 == -v, ty.to_string());
    let m0 = -ty.d1;
    let mut profile = Vec::new();
    let mut ok = true;
    for m in m0 - 1..m0 - 1 + PROFILE_WINDOW {
        let d = section_dim(&t, m)?;
        ok &= d == ty.h0(m);
        profile.push(format!("h0({m}) = {d}"));
    }
    r.check("h0 profile", ok, profile.join(", "));
    Ok(r)
}

fn quadric(k: u32, trials: usize, seed: u64) -> Result<Report> {
    let t = build_tower(k)?;
    let cert = verify_boundary_cover(&t, trials, seed)?;
    let mut r = Report::new("quadric");
    r.param("k", k);
    r.param("trials", trials);
    r.param("seed", seed);
    let witness = match cert.values.get("first_failure") {
        Some(f) => f.clone(),
        None => format!("slice {}; {} lines per family, nullity 1, points on the unit sphere", cert.values["slice"], trials),
    };
    r.push("boundary cover", status_of(&cert, |s| s == &Status::Pass), witness);
    let control = verify_ruling_cover(&QuadricModel::control(), trials.max(1), seed)?;
    let failure = control.values.get("first_failure").cloned().unwrap_or_default();
    r.check("control quadric fails", control.status == Status::Fail && failure.contains("nullity 0"), failure);
    r.detail(&cert);
    r.detail(&control);
    Ok(r)
}

fn real_slice(k: u32, n: u32, eps: &Q, samples: usize, seed: u64) -> Result<Report> {
    let p = PerturbationParams::new(k, n, eps.clone())?;
    let b = real_slice_bound(&p)?;
    let mut r = Report::new("real-slice");
    r.param("k", k);
    r.param("N", n);
    r.param("eps", p.eps_string());
    r.param("samples", samples);
    r.param("seed", seed);
    r.check("bounds", true, format!("x4 <= {}, |x_j| <= {} (coarse {})", b.r4, b.coordinate_bound, b.r));
    let rep = sample_real_slice(&p, &b, samples, seed)?;
    let witness = match rep.violations.first() {
        Some(v) => v.clone(),
        None => format!("{} samples ({} draws, {} points), max x4^2 <= {}, max |x_j| = {}", rep.samples, rep.draws, rep.points, rep.max_x4_sq_upper, rep.max_abs_coordinate),
    };
    r.check("samples within bounds", rep.violations.is_empty() && rep.samples == samples, witness);
    let m = Q::from_integer(1_000_000.into());
    let w = cone_unbounded_witness(k, &m);
    let on_cone = &w[0] * &w[0] + &w[1] * &w[1] + &w[2] * &w[2] == num_traits::pow(w[3].clone(), 2 * k as usize);
    let s: Vec<String> = w.iter().map(ToString::to_string).collect();
    r.check("unperturbed cone unbounded", on_cone && w[3] > m, format!("({}) with x4 > 10^6", s.join(", ")));
    r.detail(&b.certificate);
    Ok(r)
}

fn square_check() -> Report {
    let cert = verify_lemma_square();
    let mut r = Report::new("square-check");
    let witness = match cert.values.get("first_mismatch") {
        Some(m) => m.clone(),
        None => format!("{} chart pairs agree", cert.values.get("pairs_checked").map_or("0", String::as_str)),
    };
    r.push("f o h = g o f'", status_of(&cert, |s| s == &Status::Pass), witness);
    r.detail(&cert);
    r
}

fn all(k: u32, trials: usize, samples: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("all");
    r.param("k", k);
    r.param("trials", trials);
    r.param("samples", samples);
    r.param("seed", seed);
    r.absorb(tower(k)?);
    r.absorb(certify(k)?);
    let search = perturb_search(k, k + 8, &default_eps_candidates())?;
    let found = search.details.first().and_then(|d| {
        let params = d.get("params")?;
        let n: u32 = params.get("N")?.as_str()?.parse().ok()?;
        let eps = parse_rational(params.get("eps")?.as_str()?)?;
        Some((n, eps))
    });
    r.absorb(search);
    r.absorb(normal_bundles(k)?);
    r.absorb(quadric(k, trials, seed)?);
    if let Some((n, eps)) = found {
        r.absorb(real_slice(k, n, &eps, samples, seed)?);
    }
    r.absorb(square_check());
    Ok(r)
}
