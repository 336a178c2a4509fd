//! Boundedness of the real slice `B̃ = {x ∈ ℝ⁴ : f̃(x) = 0, x4 > 0}` of the
//! perturbed hypersurface, and unboundedness of the unperturbed cone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perturb::PerturbationParams;
use crate::algebra::gaussian::fmt_rational;
use crate::certificate::{Certificate, Status};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSliceBound {
    /// `x4 ≤ r4` on `B̃`.
    pub r4: BigRational,
    /// `|x_j| ≤ r` from `ε r^{2N} + r² ≥ r4^{2k}`.
    pub r: BigRational,
    /// Sharper `|x_j|` bound from the maximum of `y^k − ε y^N`.
    pub coordinate_bound: BigRational,
    pub certificate: Certificate,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn powi(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// Smallest positive half-integer `h` with `pred(h)`.
fn smallest_half_integer(pred: impl Fn(&BigRational) -> bool) -> BigRational {
    let mut n = 1i64;
    loop {
        let h = rat(n, 2);
        if pred(&h) {
            return h;
        }
        n += 1;
    }
}

/// Bounds for `B̃` with the exact inequality chains recorded.
///
/// On `B̃`, `Σ_j (x_j² + ε x_j^{2N}) = x4^{2k} − ε x4^{2N} ≥ 0`, so
/// `ε x4^{2N−2k} ≤ 1` and `x4 ≤ r4`; each `x_j² + ε x_j^{2N} ≤ r4^{2k}`
/// gives `|x_j| ≤ r`. With `y = x4²`, `y^k − ε y^N` peaks at
/// `y* = (k/(Nε))^{1/(N−k)}` with value `y*^k (1 − k/N)`; any rational
/// `y⁺ ≥ y*` gives `M = y⁺^k (1 − k/N)` and `|x_j| ≤ r'` whenever
/// `r'² + ε r'^{2N} ≥ M`.
pub fn real_slice_bound(params: &PerturbationParams) -> Result<RealSliceBound> {
    let p = PerturbationParams::new(params.k, params.n, params.eps.clone())?;
    let (k, n, eps) = (p.k, p.n, p.eps.clone());
    let inv_eps = eps.recip();
    let r4 = smallest_half_integer(|h| powi(h, 2 * n - 2 * k) >= inv_eps);
    let r4_2k = powi(&r4, 2 * k);
    let lhs = |x: &BigRational| &eps * powi(x, 2 * n) + powi(x, 2);
    let r = smallest_half_integer(|h| lhs(h) >= r4_2k);
    let target = rat(k as i64, n as i64) / &eps;
    let y_up = smallest_half_integer(|h| powi(h, n - k) >= target);
    let peak_bound = powi(&y_up, k) * (BigRational::one() - rat(k as i64, n as i64));
    let coordinate_bound = smallest_half_integer(|h| lhs(h) >= peak_bound);

    let f = fmt_rational;
    let mut cert = Certificate::new("real-slice", Status::Pass)
        .param("k", k)
        .param("N", n)
        .param("eps", f(&eps));
    cert.value("R4", f(&r4));
    cert.value("R", f(&r));
    cert.value("coordinate_bound", f(&coordinate_bound));
    cert.value("y_peak_upper", f(&y_up));
    cert.value("peak_value_bound", f(&peak_bound));
    cert.justify("on B~: sum_j (x_j^2 + eps x_j^(2N)) = x4^(2k) - eps x4^(2N) >= 0, hence eps x4^(2N-2k) <= 1");
    cert.justify(format!(
        "R4^(2N-2k) = {} >= 1/eps = {}, so x4 <= R4 = {}",
        f(&powi(&r4, 2 * n - 2 * k)),
        f(&inv_eps),
        f(&r4)
    ));
    cert.justify(format!(
        "eps R^(2N) + R^2 = {} >= R4^(2k) = {}, so |x_j| <= R = {}",
        f(&lhs(&r)),
        f(&r4_2k),
        f(&r)
    ));
    cert.justify(format!(
        "y+^(N-k) = {} >= k/(N eps) = {}, so max(y^k - eps y^N) <= y+^k (1 - k/N) = {}",
        f(&powi(&y_up, n - k)),
        f(&target),
        f(&peak_bound)
    ));
    cert.justify(format!(
        "eps r^(2N) + r^2 = {} >= {}, so |x_j| <= r = {}",
        f(&lhs(&coordinate_bound)),
        f(&peak_bound),
        f(&coordinate_bound)
    ));
    Ok(RealSliceBound { r4, r, coordinate_bound, certificate: cert })
}

/// Result of the seeded sampling probe of `B̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSampleReport {
    pub samples: usize,
    pub draws: usize,
    pub points: usize,
    /// Largest upper end of the isolating intervals of `x4²`.
    pub max_x4_sq_upper: BigRational,
    pub max_abs_coordinate: BigRational,
    pub violations: Vec<String>,
}

/// `q(y) = y^k − ε y^N − s`.
fn q_eval(p: &PerturbationParams, s: &BigRational, y: &BigRational) -> BigRational {
    powi(y, p.k) - &p.eps * powi(y, p.n) - s
}

/// Draws `(x1, x2, x3)` with numerators in `[−20, 20]`, denominators in
/// `[1, 20]`, scaled into `[−2R, 2R]`, until `samples` of them admit a
/// positive `x4`. Every point found is checked against the bounds: `x4 ≤ R4`
/// by an exact sign evaluation and `|x_j| ≤ R` (and the sharper coordinate
/// bound) exactly.
pub fn sample_real_slice(params: &PerturbationParams, bound: &RealSliceBound, samples: usize, seed: u64) -> Result<SliceSampleReport> {
    let p = PerturbationParams::new(params.k, params.n, params.eps.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k, n) = (p.k as f64, p.n as f64);
    let eps_f = p.eps.to_f64().unwrap_or(1.0);
    // Peak of y^k − ε y^N and its value, in floating point for rejection only.
    let y_star = (k / (n * eps_f)).powf(1.0 / (n - k));
    let peak = y_star.powf(k) - eps_f * y_star.powf(n);
    let y_star_q = BigRational::from_float(y_star).unwrap_or_else(BigRational::one);
    let top = BigRational::one() + p.eps.recip();
    let r4_sq = &bound.r4 * &bound.r4;
    let scale = (&bound.r * rat(2, 1)).to_f64().unwrap_or(2.0);
    let scale_q = &bound.r * rat(2, 1);

    let mut report = SliceSampleReport {
        samples: 0,
        draws: 0,
        points: 0,
        max_x4_sq_upper: BigRational::zero(),
        max_abs_coordinate: BigRational::zero(),
        violations: Vec::new(),
    };
    let max_draws = samples.saturating_mul(100_000).max(1_000_000);
    while report.samples < samples && report.draws < max_draws {
        report.draws += 1;
        let raw: [(i64, i64); 3] = std::array::from_fn(|_| (rng.random_range(-20..=20), rng.random_range(1..=20)));
        let s_f: f64 = raw
            .iter()
            .map(|&(a, b)| {
                let x = scale * a as f64 / (20.0 * b as f64);
                x * x + eps_f * x.powf(2.0 * n)
            })
            .sum();
        if s_f > peak * (1.0 - 1e-9) {
            continue;
        }
        let xs: Vec<BigRational> = raw.iter().map(|&(a, b)| &scale_q * rat(a, 20 * b)).collect();
        let s: BigRational = xs.iter().map(|x| powi(x, 2) + &p.eps * powi(x, 2 * p.n)).sum();
        // A rational point with q ≥ 0 brackets the largest root from below.
        if q_eval(&p, &s, &y_star_q) < BigRational::zero() {
            continue;
        }
        report.samples += 1;
        // y* ≤ y_peak_upper(y+) is not needed: on [y*_q, top] q has exactly one root.
        let (mut lo, mut hi) = (y_star_q.clone(), top.clone());
        for _ in 0..24 {
            let mid = (&lo + &hi) / rat(2, 1);
            if q_eval(&p, &s, &mid) >= BigRational::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        report.points += if s.is_zero() { 1 } else { 2 };
        if hi > report.max_x4_sq_upper {
            report.max_x4_sq_upper = hi.clone();
        }
        // Largest root ≤ R4² iff R4² lies right of the bracket start and q(R4²) ≤ 0.
        let within = r4_sq >= y_star_q && q_eval(&p, &s, &r4_sq) <= BigRational::zero();
        if !within {
            report.violations.push(format!("x = ({}) has x4^2 in [{}, {}] beyond R4^2", join(&xs), fmt_rational(&lo), fmt_rational(&hi)));
        }
        for x in &xs {
            let a = x.abs();
            if a > report.max_abs_coordinate {
                report.max_abs_coordinate = a.clone();
            }
            if a > bound.r || a > bound.coordinate_bound {
                report.violations.push(format!("|{}| exceeds the coordinate bound", fmt_rational(x)));
            }
        }
    }
    Ok(report)
}

fn join(xs: &[BigRational]) -> String {
    xs.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
}

/// `(t^k, 0, 0, t)` with `t = ⌊M⌋ + 1 > M`: a real point of the cone
/// `x1² + x2² + x3² = x4^{2k}` with `x4 > M`.
pub fn cone_unbounded_witness(k: u32, m: &BigRational) -> [BigRational; 4] {
    let t = m.floor() + BigRational::one();
    let t = if t.is_positive() { t } else { BigRational::one() };
    [powi(&t, k), BigRational::zero(), BigRational::zero(), t]
}
