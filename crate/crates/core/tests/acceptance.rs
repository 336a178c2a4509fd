//! Acceptance suite: one PASS/FAIL line per criterion 1-9.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Matrix4};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use threefold::algebra::gaussian::parse_rational;
use threefold::algebra::linalg::kernel;
use threefold::algebra::{var_names, GaussianRational, MultiPoly};
use threefold::birational::{build_tower, maps_equal, verify_lemma_square};
use threefold::bundle::{normal_bundle_sequence, section_dim, splitting_type, LaurentPoly, SplittingType, TransitionMatrix};
use threefold::certificate::{LeafKind, Status};
use threefold::quadric::{real_point, ruling_line, sample_params, verify_boundary_cover, verify_ruling_cover, Family, ProjLine, QuadricModel};
use threefold::singularity::{
    certify_perturbation, certify_tower_loci, cone_unbounded_witness, default_eps_candidates, real_slice_bound, sample_real_slice, search_perturbation,
    PerturbationParams,
};

type Outcome = Result<String, String>;
type GR = GaussianRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, secs: u64, what: &str) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(secs), || format!("{what} took {:.2} s > {secs} s", elapsed.as_secs_f64()))
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

/// 1. Tower identities for k = 1..5, compared against hand-written shapes.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    for k in 1..=5u32 {
        let t = build_tower(k).map_err(e)?;
        ensure(t.all_passed(), || format!("k={k}: failed checks {:?}", t.failed_checks()))?;
        for j in 0..=k {
            let level = t.level(j);
            let v = &level.chart.variables;
            let y = if j == 0 {
                format!("{0}^2 + {1}^2 + {2}^2 - 1", v[0], v[1], v[2])
            } else {
                format!("{0}^2 + {1}^2 + {2}^2 - {3}^{4}", v[0], v[1], v[2], v[3], 2 * j)
            };
            let expected = MultiPoly::parse(&y, v).map_err(e)?;
            ensure(level.y.equation == expected, || format!("k={k}: Y_{j} = {} != {expected}", level.y.equation))?;
            let s = [MultiPoly::parse(&format!("{} - i*{}", v[0], v[1]), v).map_err(e)?, MultiPoly::parse(&format!("{} - {}^{j}", v[2], v[3]), v).map_err(e)?];
            ensure(level.center.generators == s, || format!("k={k}: S_{j} = {:?}", level.center.generators))?;
            if j >= 1 {
                ensure(level.y_multiplicity == Some(2), || format!("k={k}: multiplicity of Y_{j} at P_{j} is {:?}", level.y_multiplicity))?;
            }
        }
    }
    within(start.elapsed(), 5, "towers")?;
    Ok(format!("k=1..5 towers, Y_j, S_j and multiplicity 2 exact ({:.2} s)", start.elapsed().as_secs_f64()))
}

/// 2. Singular-locus certificates for every level, no inconclusive leaves.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for k in 1..=5u32 {
        let t = build_tower(k).map_err(e)?;
        let checks = certify_tower_loci(&t).map_err(e)?;
        ensure(checks.len() == 4 * k as usize + 1, || format!("k={k}: {} certificates", checks.len()))?;
        for c in &checks {
            ensure(c.passed(), || format!("k={k}: {} is {} (expected {})", c.name, c.certificate.status, c.expected))?;
            let unresolved = c.certificate.leaves().iter().filter(|(_, l)| l.kind == LeafKind::Unresolved).count();
            ensure(unresolved == 0, || format!("k={k}: {} has {unresolved} unresolved leaves", c.name))?;
            count += 1;
        }
        let top = &checks[0];
        ensure(top.certificate.status == Status::OnlySingularAt(vec![vec![GR::zero(); 4]]), || format!("k={k}: Y_k is {}", top.certificate.status))?;
    }
    within(start.elapsed(), 10, "certificates")?;
    Ok(format!("{count} certificates: Y_k ONLY_SINGULAR_AT origin, Y_0 and off-chart transforms SMOOTH ({:.2} s)", start.elapsed().as_secs_f64()))
}

/// 3. Perturbation (1, 2, 1): leaf table against the hand enumeration
/// over `z_j² ∈ {0, −1/2}`, `z4² ∈ {0, 1/2}`.
fn criterion_3() -> Outcome {
    let p = PerturbationParams::new(1, 2, q(1, 1)).map_err(e)?;
    let cert = certify_perturbation(&p).map_err(e)?;
    ensure(cert.status == Status::Certified, || format!("status {}", cert.status))?;
    // f restricted to squares: Σ_{j≤3} (s_j + s_j²) − s_4 + s_4².
    let f = |s: &[BigRational; 4]| -> BigRational { s[..3].iter().map(|x| x + x * x).sum::<BigRational>() - &s[3] + &s[3] * &s[3] };
    let mut expected: BTreeMap<Vec<bool>, BigRational> = BTreeMap::new();
    for mask in 0..16u32 {
        let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
        let s: [BigRational; 4] = std::array::from_fn(|i| match (bits[i], i) {
            (false, _) => BigRational::zero(),
            (true, 3) => q(1, 2),
            (true, _) => q(-1, 2),
        });
        let value = f(&s);
        let m = bits[..3].iter().filter(|b| **b).count() as i64;
        let n = bits[3] as i64;
        ensure(value == q(-(m + n), 4), || format!("hand enumeration disagrees at {bits:?}"))?;
        expected.insert(bits, value);
    }
    let vars = var_names(&["z1", "z2", "z3", "z4"]);
    let roots = [
        MultiPoly::parse("4*z1^2 + 2", &vars).map_err(e)?,
        MultiPoly::parse("4*z2^2 + 2", &vars).map_err(e)?,
        MultiPoly::parse("4*z3^2 + 2", &vars).map_err(e)?,
        MultiPoly::parse("4*z4^2 - 2", &vars).map_err(e)?,
    ];
    let mut got: BTreeMap<Vec<bool>, BigRational> = BTreeMap::new();
    for (path, leaf) in cert.leaves() {
        let mut bits = vec![false; 4];
        for c in &path {
            let i = vars.iter().position(|v| *v == c.variable).ok_or("unknown variable")?;
            if let Some(r) = &c.root_of {
                let r = r.embed(&vars).map_err(e)?;
                ensure(r == roots[i], || format!("unexpected root constraint {c}"))?;
                bits[i] = true;
            }
        }
        let value = leaf.value.as_deref().and_then(parse_rational).ok_or_else(|| format!("leaf {bits:?} has no rational value"))?;
        ensure(got.insert(bits.clone(), value).is_none(), || format!("duplicate leaf {bits:?}"))?;
    }
    ensure(got == expected, || format!("leaf table {got:?} != {expected:?}"))?;
    Ok("CERTIFIED; 16 leaf values equal -(m+n)/4 exactly".into())
}

/// Complex roots of `x^d − c` as eigenvalues of the companion matrix of
/// `(y + σ)^d − c`, shifted back by `σ`; the shift keeps QR from stalling
/// on the rotation-symmetric spectrum.
fn roots_of_binomial(d: usize, c: f64) -> Result<Vec<nalgebra::Complex<f64>>, String> {
    const SIGMA: f64 = 0.37;
    // Monic coefficients a_0..a_{d-1} of (y + σ)^d − c.
    let mut binom = 1.0;
    let mut a = vec![0.0; d];
    for (i, ai) in a.iter_mut().enumerate() {
        if i > 0 {
            binom = binom * (d - i + 1) as f64 / i as f64;
        }
        *ai = binom * SIGMA.powi((d - i) as i32);
    }
    a[0] -= c;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for (i, ai) in a.iter().enumerate() {
        m[(i, d - 1)] = -ai;
    }
    let schur = m.try_schur(1e-14, 100_000).ok_or_else(|| format!("companion QR did not converge for x^{d} = {c}"))?;
    let roots: Vec<_> = schur.complex_eigenvalues().iter().map(|r| r + SIGMA).collect();
    for r in &roots {
        if (r.powu(d as u32) - c).norm() > 1e-8 * c.abs().max(1.0) {
            return Err(format!("companion root {r} of x^{d} = {c} is inaccurate"));
        }
    }
    Ok(roots)
}

/// Floating-point critical-point oracle: every critical point other than
/// the origin has `|f| > 1e-6`.
fn float_oracle(k: u32, n: u32, eps: f64) -> Result<f64, String> {
    type C = nalgebra::Complex<f64>;
    let zero = C::new(0.0, 0.0);
    let mut zj = vec![zero];
    zj.extend(roots_of_binomial((2 * n - 2) as usize, -1.0 / (n as f64 * eps))?);
    let mut z4 = vec![zero];
    z4.extend(roots_of_binomial((2 * n - 2 * k) as usize, k as f64 / (n as f64 * eps))?);
    let f = |z: [C; 4]| -> C {
        let mut s = z[0] * z[0] + z[1] * z[1] + z[2] * z[2] - z[3].powu(2 * k);
        for x in z {
            s += x.powu(2 * n) * eps;
        }
        s
    };
    let grad_ok = |z: [C; 4]| -> bool {
        let mut g: [C; 4] = std::array::from_fn(|i| z[i] * 2.0 + z[i].powu(2 * n - 1) * (2.0 * n as f64 * eps));
        g[3] = -z[3].powu(2 * k - 1) * (2.0 * k as f64) + z[3].powu(2 * n - 1) * (2.0 * n as f64 * eps);
        g.iter().all(|x| x.norm() < 1e-6)
    };
    let mut min = f64::INFINITY;
    for a in &zj {
        for b in &zj {
            for c in &zj {
                for d in &z4 {
                    let z = [*a, *b, *c, *d];
                    if !grad_ok(z) {
                        return Err(format!("oracle root {z:?} is not critical"));
                    }
                    if z.iter().all(|x| x.norm() == 0.0) {
                        continue;
                    }
                    min = min.min(f(z).norm());
                }
            }
        }
    }
    if min > 1e-6 {
        Ok(min)
    } else {
        Err(format!("critical value {min:e} within 1e-6 of zero"))
    }
}

/// 4. Perturbation search for k = 1..4, each pair re-verified in floating point.
fn criterion_4() -> Outcome {
    let mut found = Vec::new();
    for k in 1..=4u32 {
        let out = search_perturbation(k, k + 8, &default_eps_candidates()).map_err(e)?;
        ensure(out.certificate.status == Status::Certified, || format!("k={k}: {}", out.certificate.status))?;
        let p = &out.params;
        let eps = p.eps.numer().to_string().parse::<f64>().unwrap() / p.eps.denom().to_string().parse::<f64>().unwrap();
        let margin = float_oracle(p.k, p.n, eps).map_err(|m| format!("k={k}: {m}"))?;
        found.push(format!("k={k}: N={} eps={} (min |f| {margin:.3e})", p.n, p.eps_string()));
    }
    Ok(found.join("; "))
}

fn expected_sequence(k: u32) -> Vec<SplittingType> {
    let mut v = vec![SplittingType { d1: 0, d2: -2 }; k as usize - 1];
    v.push(SplittingType { d1: -1, d2: -1 });
    v
}

/// 5. Normal-bundle sequence for k = 1..5.
fn criterion_5() -> Outcome {
    for k in 1..=5u32 {
        let got = normal_bundle_sequence(k).map_err(e)?;
        ensure(got == expected_sequence(k), || format!("k={k}: {got:?}"))?;
    }
    Ok("k=1..5: (0, -2) x (k-1), then (-1, -1)".into())
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: i64, inverted: bool) -> LaurentPoly {
    let deg = rng.random_range(0..=max_deg);
    LaurentPoly::from_terms((0..=deg).map(|e| {
        let c = GR::new(q(rng.random_range(-5..=5), rng.random_range(1..=3)), q(rng.random_range(-2..=2), 1));
        (if inverted { -e } else { e }, c)
    }))
}

/// Constant-determinant polynomial matrix in `z` (or `1/z`) of degree ≤ 3:
/// `diag(a, b) · [[1, p], [0, 1]] · [[1, 0], [r, 1]]` with `deg p + deg r ≤ 3`.
fn unimodular(rng: &mut ChaCha8Rng, inverted: bool) -> TransitionMatrix {
    let nonzero = |rng: &mut ChaCha8Rng| GR::new(q(rng.random_range(1..=4) * if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(1..=3)), q(rng.random_range(-2..=2), 1));
    let (a, b) = (nonzero(rng), nonzero(rng));
    let dp = rng.random_range(0..=2);
    let p = random_poly(rng, dp, inverted);
    let r = random_poly(rng, 3 - dp, inverted);
    let one = LaurentPoly::one;
    let zero = LaurentPoly::zero;
    let d = TransitionMatrix::diagonal(LaurentPoly::monomial(0, a), LaurentPoly::monomial(0, b));
    let upper = TransitionMatrix::new([[one(), p], [zero(), one()]]);
    let lower = TransitionMatrix::new([[one(), zero()], [r, one()]]);
    let m = d.mul(&upper).mul(&lower);
    if rng.random_bool(0.5) {
        // Swap rows for a determinant of either sign.
        let [r0, r1] = m.entries;
        TransitionMatrix::new([r1, r0])
    } else {
        m
    }
}

/// 6. 200 random cocycles `H_V(1/z) · diag(z^−d1, z^−d2) · H_U(z)`.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in 0..200 {
        let (d1, d2) = (rng.random_range(-4..=4), rng.random_range(-4..=4));
        let hv = unimodular(&mut rng, true);
        let hu = unimodular(&mut rng, false);
        let t = hv.mul(&TransitionMatrix::diagonal(LaurentPoly::z_pow(-d1), LaurentPoly::z_pow(-d2))).mul(&hu);
        let want = SplittingType { d1: d1.max(d2), d2: d1.min(d2) };
        let got = splitting_type(&t).map_err(|x| format!("sample {n} {t}: {x}"))?;
        ensure(got == want, || format!("sample {n}: {t} gave {got}, expected {want}"))?;
        let (_, v) = t.det_valuation().map_err(e)?;
        ensure(got.d1 + got.d2 == -v, || format!("sample {n}: d1 + d2 != -v"))?;
        for m in -want.d1 - 1..-want.d1 + 5 {
            let h0 = section_dim(&t, m).map_err(e)?;
            let law = (want.d1 + m + 1).max(0) + (want.d2 + m + 1).max(0);
            ensure(h0 as i64 == law, || format!("sample {n}: h0({m}) = {h0}, law {law}"))?;
        }
    }
    Ok("200/200 recovered; h0 profile law over 6 twists".into())
}

/// Nullity of the real 4×4 system of a line, by SVD in floating point.
fn float_nullity(line: &ProjLine) -> usize {
    let f = |x: &BigRational| x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
    let mut m = Matrix4::<f64>::zeros();
    for (r, form) in line.forms.iter().enumerate() {
        for c in 0..4 {
            m[(2 * r, c)] = f(form[c].re());
            m[(2 * r + 1, c)] = f(form[c].im());
        }
    }
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|s| **s <= 1e-9 * top).count()
}

/// 7. 500 lines per family (seed 0) plus the control quadric.
fn criterion_7() -> Outcome {
    let t = build_tower(2).map_err(e)?;
    let cert = verify_boundary_cover(&t, 500, 0).map_err(e)?;
    ensure(cert.status == Status::Pass, || format!("boundary cover: {:?}", cert.values.get("first_failure")))?;
    let vars = var_names(&["z0", "z1", "z2", "z3"]);
    let qeq = MultiPoly::parse("z0^2 + z1^2 + z2^2 - z3^2", &vars).map_err(e)?;
    let mut lines = 0;
    for family in [Family::A, Family::B] {
        for p in sample_params(family, 500, 0) {
            let line = ruling_line(&p).map_err(e)?;
            // Q vanishes on span{u, w} iff Q(u) = Q(w) = Q(u + w) = 0.
            let basis = kernel(&line.forms.iter().map(|f| f.to_vec()).collect(), 4);
            ensure(basis.len() == 2, || format!("{p}: line kernel has dimension {}", basis.len()))?;
            let sum: Vec<GR> = basis[0].iter().zip(&basis[1]).map(|(a, b)| a + b).collect();
            ensure([&basis[0], &basis[1], &sum].iter().all(|u| qeq.evaluate(u).is_zero()), || format!("{p}: line not on Q"))?;
            let rp = real_point(&line).map_err(e)?;
            let pt = rp.point.ok_or_else(|| format!("{p}: no real point"))?;
            ensure(rp.nullity == 1 && float_nullity(&line) == 1, || format!("{p}: nullity {} (float {})", rp.nullity, float_nullity(&line)))?;
            ensure(pt.is_real() && line.contains(&pt) && qeq.evaluate(&pt.coords).is_zero(), || format!("{p}: point {pt} not on line and Q"))?;
            let w = pt.coords[3].inv().ok_or("point at z3 = 0")?;
            let r2: GR = pt.coords[..3].iter().map(|x| (x * &w).pow(2)).sum();
            ensure(r2.is_one(), || format!("{p}: affine point not on the unit sphere"))?;
            lines += 1;
        }
    }
    let control = verify_ruling_cover(&QuadricModel::control(), 500, 0).map_err(e)?;
    let failure = control.values.get("first_failure").cloned().unwrap_or_default();
    ensure(control.status == Status::Fail && failure.starts_with("A[000]") && failure.contains("nullity 0"), || format!("control quadric: {failure}"))?;
    Ok(format!("{lines} lines: nullity 1, real points on line, Q and the unit sphere; control fails at its first sample"))
}

/// 8. Real-slice bounds, 10⁴ samples, and unbounded cone witnesses.
fn criterion_8() -> Outcome {
    let p = PerturbationParams::new(1, 2, q(1, 1)).map_err(e)?;
    let b = real_slice_bound(&p).map_err(e)?;
    ensure(b.r4 == q(1, 1) && b.coordinate_bound == q(1, 2), || format!("R4 = {}, r = {}", b.r4, b.coordinate_bound))?;
    let rep = sample_real_slice(&p, &b, 10_000, 0).map_err(e)?;
    ensure(rep.samples == 10_000 && rep.violations.is_empty(), || format!("{} samples, violations {:?}", rep.samples, rep.violations.first()))?;
    // Independent float probe: x4² = y solves y − y² = s with s = Σ x_j² + x_j⁴.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hits = 0;
    for _ in 0..100_000 {
        let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let s: f64 = x.iter().map(|v| v * v + v.powi(4)).sum();
        if 1.0 - 4.0 * s < 0.0 {
            continue;
        }
        hits += 1;
        let y = (1.0 + (1.0 - 4.0 * s).sqrt()) / 2.0;
        ensure(y <= 1.0 + 1e-12 && x.iter().all(|v| v.abs() <= 0.5), || format!("float probe point {x:?}, x4^2 = {y}"))?;
    }
    let m = q(1_000_000, 1);
    for k in 1..=4u32 {
        let w = cone_unbounded_witness(k, &m);
        let lhs: BigRational = w[..3].iter().map(|x| x * x).sum();
        ensure(lhs == num_traits::pow(w[3].clone(), 2 * k as usize), || format!("k={k}: witness off the cone"))?;
        let norm2: BigRational = w.iter().map(|x| x * x).sum();
        ensure(w[3].is_positive() && norm2 > &m * &m, || format!("k={k}: witness norm too small"))?;
    }
    Ok(format!("x4 <= 1, |x_j| <= 1/2; 10^4 exact samples and {hits} float probes clean; cone witnesses for k=1..4"))
}

/// 9. The lemma square and every tower square for k ≤ 4.
fn criterion_9() -> Outcome {
    let c = verify_lemma_square();
    ensure(c.status == Status::Pass, || format!("lemma square: {:?}", c.values.get("first_mismatch")))?;
    let mut squares = 0;
    for k in 1..=4u32 {
        let t = build_tower(k).map_err(e)?;
        for j in 1..=k {
            for idx in 0..2 {
                let (l, r) = t.square_composites(j, idx).map_err(e)?;
                ensure(maps_equal(&l, &r).map_err(e)?, || format!("k={k}: square {j} chart {idx} differs"))?;
                squares += 1;
            }
        }
    }
    Ok(format!("lemma square PASS; {squares} tower squares commute exactly"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("tower identities", criterion_1),
        ("singular-locus certificates", criterion_2),
        ("perturbation certificate", criterion_3),
        ("perturbation search", criterion_4),
        ("normal-bundle sequence", criterion_5),
        ("splitting-type oracle", criterion_6),
        ("quadric suite", criterion_7),
        ("real slice", criterion_8),
        ("commutativity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} [{secs:.2} s] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.2} s] {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
