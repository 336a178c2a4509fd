//! Univariate views of multivariate polynomials, fraction-free Sylvester
//! resultants, and dense univariate helpers over ℚ(i).

use num_traits::Zero;

use super::gaussian::GaussianRational;
use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};

/// A polynomial seen as `Σ coeffs[d] * main^d`, with coefficients over the
/// remaining variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPolyView {
    base_vars: Vec<String>,
    main: usize,
    coeffs: Vec<MultiPoly>,
}

impl UniPolyView {
    pub fn new(f: &MultiPoly, main: &str) -> Result<Self> {
        let idx = f.var_index(main)?;
        let rest: Vec<String> =
            f.variables().iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, v)| v.clone()).collect();
        let deg = f.degree_in(idx) as usize;
        let mut coeffs = vec![MultiPoly::zero(&rest); if f.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in f.terms() {
            let mut e = m.0.clone();
            let d = e.remove(idx) as usize;
            coeffs[d] = &coeffs[d] + &MultiPoly::monomial(&rest, Monomial(e), c.clone());
        }
        Ok(UniPolyView { base_vars: f.variables().to_vec(), main: idx, coeffs })
    }

    pub fn main_var(&self) -> &str {
        &self.base_vars[self.main]
    }

    /// Variables of the coefficients (base list without the main variable).
    pub fn coeff_vars(&self) -> Vec<String> {
        self.base_vars.iter().enumerate().filter(|(i, _)| *i != self.main).map(|(_, v)| v.clone()).collect()
    }

    /// Degree in the main variable; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// Reassembles the base polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.base_vars);
        for (d, c) in self.coeffs.iter().enumerate() {
            for (m, x) in c.terms() {
                let mut e = m.0.clone();
                e.insert(self.main, d as u32);
                out = &out + &MultiPoly::monomial(&self.base_vars, Monomial(e), x.clone());
            }
        }
        out
    }
}

/// Determinant by Bareiss fraction-free elimination (with row pivoting).
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>, vars: &[String]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars);
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Resultant with respect to the shared main variable, as the determinant
/// of the Sylvester matrix.
pub fn resultant(f: &UniPolyView, g: &UniPolyView) -> Result<MultiPoly> {
    if f.main_var() != g.main_var() {
        return Err(Error::Validation(format!("main variables differ: {} vs {}", f.main_var(), g.main_var())));
    }
    let vars = f.coeff_vars();
    if vars != g.coeff_vars() {
        return Err(Error::VariableMismatch { left: vars, right: g.coeff_vars() });
    }
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial("resultant"));
    };
    if m == 0 {
        return Ok(f.coeffs[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(g.coeffs[0].pow(m as u32));
    }
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![zero.clone(); size];
        for (d, c) in f.coeffs.iter().enumerate() {
            row[r + m - d] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![zero.clone(); size];
        for (d, c) in g.coeffs.iter().enumerate() {
            row[r + n - d] = c.clone();
        }
        rows.push(row);
    }
    Ok(bareiss_det(rows, &vars))
}

/// Resultant of two polynomials with respect to `var`; the result lives
/// over the remaining variables.
pub fn resultant_in(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly> {
    resultant(&UniPolyView::new(f, var)?, &UniPolyView::new(g, var)?)
}

// Dense univariate polynomials, coefficients in ascending degree.

pub fn trim(mut a: Vec<GaussianRational>) -> Vec<GaussianRational> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn dense_rem(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let b = trim(b.to_vec());
    let db = b.len().checked_sub(1).expect("division by zero polynomial");
    let lc_inv = b[db].inv().expect("nonzero lc");
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let dr = r.len() - 1;
        let q = &r[dr] * &lc_inv;
        for (k, bk) in b.iter().enumerate() {
            let sub = bk * &q;
            r[dr - db + k] -= &sub;
        }
        r = trim(r);
    }
    r
}

/// Monic gcd (empty for gcd(0, 0)).
pub fn dense_gcd(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        let inv = lc.inv().expect("nonzero");
        for c in &mut a {
            *c = &*c * &inv;
        }
    }
    a
}

pub fn dense_eval(a: &[GaussianRational], x: &GaussianRational) -> GaussianRational {
    a.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
}
