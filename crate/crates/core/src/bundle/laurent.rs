//! Laurent polynomials in `z` and 2×2 transition matrices over the overlap
//! `ℂ*` of the two standard charts of ℙ¹ (`w = 1/z`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::algebra::parse::parse_terms;
use crate::algebra::poly::signed_coefficient;
use crate::algebra::GaussianRational;
use crate::error::{Error, Result};

/// Finite sum `Σ c_e z^e`, `e ∈ ℤ`, with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, GaussianRational::from_int(1))
    }

    pub fn monomial(e: i64, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `z^e`.
    pub fn z_pow(e: i64) -> Self {
        Self::monomial(e, GaussianRational::from_int(1))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, GaussianRational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Parses the polynomial grammar in the single variable `z`, with
    /// negative exponents allowed (`"z^-1 + 2"`).
    pub fn parse(text: &str) -> Result<Self> {
        let raw = parse_terms(text, &["z".to_string()], true)?;
        Ok(Self::from_terms(raw.into_iter().map(|(e, c)| (e[0], c))))
    }

    fn add_term(&mut self, e: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &GaussianRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> GaussianRational {
        self.terms.get(&e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `(c, e)` when the polynomial is the single term `c z^e`.
    pub fn as_monomial(&self) -> Option<(GaussianRational, i64)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(&e, c)| (c.clone(), e)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, x)| (e, x * c)))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e + by, c.clone())).collect() }
    }

    /// Substitutes `z ↦ 1/z`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &o.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, grammar-compatible (`z^-1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (&e, c)) in self.terms.iter().rev().enumerate() {
            let mono = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{e}"),
            };
            let (neg, coef) = signed_coefficient(c, !mono.is_empty());
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (coef.is_empty(), mono.is_empty()) {
                (true, _) => f.write_str(&mono)?,
                (false, true) => f.write_str(&coef)?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A 2×2 transition matrix `T(z)` acting on fiber coordinates: sections
/// over the `z`-chart map to the `w`-chart by `s_w = T · s_z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransitionMatrix {
    pub entries: [[LaurentPoly; 2]; 2],
}

impl TransitionMatrix {
    pub fn new(entries: [[LaurentPoly; 2]; 2]) -> Self {
        TransitionMatrix { entries }
    }

    pub fn parse(rows: [[&str; 2]; 2]) -> Result<Self> {
        let p = |s: &str| LaurentPoly::parse(s);
        Ok(TransitionMatrix { entries: [[p(rows[0][0])?, p(rows[0][1])?], [p(rows[1][0])?, p(rows[1][1])?]] })
    }

    pub fn identity() -> Self {
        Self::diagonal(LaurentPoly::one(), LaurentPoly::one())
    }

    pub fn diagonal(a: LaurentPoly, b: LaurentPoly) -> Self {
        TransitionMatrix { entries: [[a, LaurentPoly::zero()], [LaurentPoly::zero(), b]] }
    }

    pub fn det(&self) -> LaurentPoly {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    /// `det T = c · z^v`; anything else is not a cocycle.
    pub fn det_valuation(&self) -> Result<(GaussianRational, i64)> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::NotCocycle("determinant is zero".into()));
        }
        d.as_monomial().ok_or_else(|| Error::NotCocycle(format!("determinant {d} is not a monomial")))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.entries.iter().flatten().filter_map(LaurentPoly::max_exponent).max()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.entries.iter().flatten().filter_map(LaurentPoly::min_exponent).min()
    }

    /// Largest minus smallest exponent over all entries.
    pub fn exponent_span(&self) -> i64 {
        match (self.max_exponent(), self.min_exponent()) {
            (Some(a), Some(b)) => a - b,
            _ => 0,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        TransitionMatrix { entries: self.entries.clone().map(|row| row.map(|x| x.scale(c))) }
    }

    pub fn mul(&self, o: &TransitionMatrix) -> Self {
        let a = &self.entries;
        let b = &o.entries;
        let cell = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        TransitionMatrix { entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]] }
    }

    /// Entries as strings, row-major (the CLI's JSON matrix format).
    pub fn to_strings(&self) -> [[String; 2]; 2] {
        self.entries.clone().map(|row| row.map(|x| x.to_string()))
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_strings();
        write!(f, "[[{}, {}], [{}, {}]]", s[0][0], s[0][1], s[1][0], s[1][1])
    }
}
