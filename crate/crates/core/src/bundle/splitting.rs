//! Splitting types of rank-2 bundles on ℙ¹ by section counting, and the
//! linearization of the local model `W_k` along its null section.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::laurent::{LaurentPoly, TransitionMatrix};
use crate::algebra::linalg::{rank, Matrix};
use crate::algebra::{var_names, GaussianRational, MultiPoly};
use crate::error::{Error, Result};

/// `O(d1) ⊕ O(d2)` with `d1 ≥ d2`; a scalar transition `z^{−d}` has degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplittingType {
    pub d1: i64,
    pub d2: i64,
}

impl SplittingType {
    /// Sorts the pair so that `d1 ≥ d2`.
    pub fn new(a: i64, b: i64) -> Self {
        SplittingType { d1: a.max(b), d2: a.min(b) }
    }

    /// `h⁰(O(d1 + m) ⊕ O(d2 + m)) = Σ max(0, d_i + m + 1)`.
    pub fn h0(&self, m: i64) -> usize {
        ((self.d1 + m + 1).max(0) + (self.d2 + m + 1).max(0)) as usize
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// Number of twists over which [`splitting_type`] re-verifies the h⁰ profile.
pub const PROFILE_WINDOW: i64 = 6;

/// Dimension of `{u ∈ ℚ(i)[z]², deg u ≤ B : z^{−m} T u has only
/// non-positive exponents}`, i.e. `h⁰` of the bundle twisted by `O(m)`.
fn section_dim_with_bound(t: &TransitionMatrix, m: i64, b: i64) -> usize {
    if b < 0 {
        return 0;
    }
    let n = (b + 1) as usize;
    let emax = t.max_exponent().unwrap_or(0);
    let top = emax + b - m;
    if top < 1 {
        return 2 * n;
    }
    let mut rows: Matrix = Vec::new();
    for row in &t.entries {
        for e in 1..=top {
            let mut eq = vec![GaussianRational::zero(); 2 * n];
            for (col, entry) in row.iter().enumerate() {
                for (a, c) in entry.terms() {
                    let j = e + m - a;
                    if (0..=b).contains(&j) {
                        eq[col * n + j as usize] = c.clone();
                    }
                }
            }
            if eq.iter().any(|x| !x.is_zero()) {
                rows.push(eq);
            }
        }
    }
    2 * n - rank(&rows)
}

/// Degree bound for sections of the `m`-twist: `max(m + span + 1, m − v + emax)`.
/// Every section is `z^m adj(T) v / (c z^v)` with `v` polynomial in `1/z`,
/// so its degree is at most `m − v + emax`.
pub fn section_degree_bound(t: &TransitionMatrix, m: i64) -> Result<i64> {
    let (_, v) = t.det_valuation()?;
    let emax = t.max_exponent().unwrap_or(0);
    Ok((m + t.exponent_span() + 1).max(m - v + emax))
}

/// `h⁰` of the bundle with transition `T`, twisted by `O(m)`.
pub fn section_dim(t: &TransitionMatrix, m: i64) -> Result<usize> {
    let b = section_degree_bound(t, m)?;
    let dim = section_dim_with_bound(t, m, b);
    let check = section_dim_with_bound(t, m, b + 2);
    if dim != check {
        return Err(Error::InternalInconsistent(format!("section dimension at m = {m} changed from {dim} to {check} when raising the degree bound {b} by 2")));
    }
    Ok(dim)
}

/// Splitting type by scanning twists for the first nonzero `h⁰`.
pub fn splitting_type(t: &TransitionMatrix) -> Result<SplittingType> {
    let (_, v) = t.det_valuation()?;
    let mut m = -t.exponent_span();
    while section_dim(t, m)? > 0 {
        m -= 1;
    }
    while section_dim(t, m)? == 0 {
        m += 1;
    }
    let d1 = -m;
    let ty = SplittingType::new(d1, -v - d1);
    if ty.d1 != d1 {
        return Err(Error::InternalInconsistent(format!("first twist m0 = {m} gives d1 = {d1} below d2 = {}", -v - d1)));
    }
    for w in m - 1..m - 1 + PROFILE_WINDOW {
        let got = section_dim(t, w)?;
        if got != ty.h0(w) {
            return Err(Error::InternalInconsistent(format!("h0 at m = {w} is {got}, but type {ty} predicts {}", ty.h0(w))));
        }
    }
    Ok(ty)
}

fn to_laurent(p: &MultiPoly, z: usize) -> Result<LaurentPoly> {
    let mut out = Vec::new();
    for (mono, c) in p.terms() {
        if mono.0.iter().enumerate().any(|(i, &e)| i != z && e != 0) {
            return Err(Error::InternalInconsistent(format!("{p} is not a polynomial in z alone")));
        }
        out.push((mono.0[z] as i64, c.clone()));
    }
    Ok(LaurentPoly::from_terms(out))
}

/// `T[i][j] = ∂y_i/∂x_j` at `x1 = x2 = 0`, for fiber coordinates given over
/// the variables `(z, x1, x2)`.
pub fn linearize_along_curve(y1: &MultiPoly, y2: &MultiPoly) -> Result<TransitionMatrix> {
    let vars = var_names(&["z", "x1", "x2"]);
    let mut entries: [[LaurentPoly; 2]; 2] = Default::default();
    for (i, y) in [y1, y2].into_iter().enumerate() {
        let y = y.embed(&vars)?;
        let restrict = |p: &MultiPoly| p.specialize(1, &GaussianRational::zero()).specialize(2, &GaussianRational::zero());
        let on_curve = restrict(&y);
        if !on_curve.is_zero() {
            return Err(Error::CurveNotFixed(format!("y{} = {y} restricts to {on_curve} on x1 = x2 = 0", i + 1)));
        }
        for (j, x) in ["x1", "x2"].into_iter().enumerate() {
            entries[i][j] = to_laurent(&restrict(&y.differentiate(x)?), 0)?;
        }
    }
    Ok(TransitionMatrix::new(entries))
}

/// The transition of `W_j`: `y1 = z² x1 + z x2^j`, `y2 = x2`.
pub fn local_model_transition(j: u32) -> Result<[MultiPoly; 2]> {
    if j < 1 {
        return Err(Error::Validation(format!("j must be at least 1, got {j}")));
    }
    let vars = var_names(&["z", "x1", "x2"]);
    Ok([MultiPoly::parse(&format!("z^2*x1 + z*x2^{j}"), &vars)?, MultiPoly::parse("x2", &vars)?])
}

/// Splitting types of `N_{C_j|X_j}` for `j = k, …, 1`.
pub fn normal_bundle_sequence(k: u32) -> Result<Vec<SplittingType>> {
    if k < 1 {
        return Err(Error::Validation(format!("k must be at least 1, got {k}")));
    }
    (1..=k)
        .rev()
        .map(|j| {
            let [y1, y2] = local_model_transition(j)?;
            splitting_type(&linearize_along_curve(&y1, &y2)?)
        })
        .collect()
}
