//! Sparse multivariate polynomials over ℚ(i) with an explicit variable list.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::gaussian::{fmt_rational, GaussianRational};
use super::parse::parse_terms;
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically: total degree first,
/// ties broken lexicographically in variable order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed, ordered list of named variables.
///
/// Zero coefficients are never stored. Two polynomials compare equal only if
/// they share the variable list and the term map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, GaussianRational>,
}

pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly { vars: Arc::new(vars.to_vec()), terms: BTreeMap::new() }
    }

    fn zero_like(&self) -> Self {
        MultiPoly { vars: Arc::clone(&self.vars), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    fn constant_like(&self, c: GaussianRational) -> Self {
        let mut p = self.zero_like();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(self.nvars()), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    /// The coordinate function `name`.
    pub fn var(vars: &[String], name: &str) -> Result<Self> {
        let idx = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(Self::monomial(vars, Monomial(e), GaussianRational::one()))
    }

    pub fn monomial(vars: &[String], m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, GaussianRational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Parses the textual grammar over `vars`.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        let raw = parse_terms(text, vars, false)?;
        Ok(Self::from_terms(
            vars,
            raw.into_iter().map(|(e, c)| (e.into_iter().map(|x| x as u32).collect(), c)),
        ))
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<GaussianRational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(GaussianRational::zero))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    pub fn involves(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.vars.to_vec(), right: other.vars.to_vec() })
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Exact product; errors when the variable lists differ.
    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = self.zero_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = self.constant_like(GaussianRational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, var: &str) -> Result<MultiPoly> {
        let idx = self.var_index(var)?;
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] -= 1;
            out.add_term(m2, c * &GaussianRational::from_int(e as i64));
        }
        Ok(out)
    }

    /// Composition: variable `j` of `self` is replaced by `images[j]`; every
    /// image must live over `target_vars`.
    pub fn substitute(&self, target_vars: &[String], images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            let missing = self.vars.get(images.len()).cloned().unwrap_or_default();
            return Err(Error::UnassignedVariable(missing));
        }
        for img in images {
            if img.vars.as_slice() != target_vars {
                return Err(Error::VariableMismatch { left: img.vars.to_vec(), right: target_vars.to_vec() });
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|img| vec![MultiPoly::one(target_vars), img.clone()]).collect();
        let mut out = MultiPoly::zero(target_vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target_vars, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[j];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            for (mt, ct) in t.terms {
                out.add_term(mt, ct);
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a point (one value per variable).
    pub fn evaluate(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(point).fold(c.clone(), |acc, (&e, x)| if e == 0 { acc } else { &acc * &x.pow(e) })
            })
            .sum()
    }

    /// Substitutes a value for one variable, keeping the variable list.
    pub fn specialize(&self, idx: usize, value: &GaussianRational) -> MultiPoly {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            let c2 = if e == 0 { c.clone() } else { c * &value.pow(e) };
            out.add_term(m2, c2);
        }
        out
    }

    /// Splits off the largest power of `var` dividing `self`:
    /// `self = var^multiplicity * quotient`.
    pub fn extract_variable_power(&self, var: &str) -> Result<(u32, MultiPoly)> {
        let idx = self.var_index(var)?;
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("extract_variable_power"));
        }
        let e = self.terms.keys().map(|m| m.0[idx]).min().unwrap_or(0);
        let mut shift = Monomial::one(self.nvars());
        shift.0[idx] = e;
        Ok((e, self.div_monomial(&shift)))
    }

    /// Greatest monomial dividing every term (the zero polynomial yields 1).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.nvars());
        };
        let mut g = first.0.clone();
        for m in it {
            for (a, b) in g.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        Monomial(g)
    }

    /// Divides every term by `m`; `m` must divide each of them.
    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(k, c)| (k.div(m), c.clone())).collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if self.vars != d.vars {
            return None;
        }
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = self.zero_like();
        while let Some((rm, rc)) = rem.leading_term() {
            if !lm.divides(rm) {
                return None;
            }
            let tm = rm.div(&lm);
            let tc = rc / &lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&tm), -(dc * &tc));
            }
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Same terms over a new list of names (positional renaming).
    pub fn rename(&self, names: &[String]) -> Result<MultiPoly> {
        if names.len() != self.nvars() {
            return Err(Error::VariableMismatch { left: self.vars.to_vec(), right: names.to_vec() });
        }
        Ok(MultiPoly { vars: Arc::new(names.to_vec()), terms: self.terms.clone() })
    }

    /// Re-expresses `self` over `target`, matching variables by name. Every
    /// variable that occurs must exist in `target`.
    pub fn embed(&self, target: &[String]) -> Result<MultiPoly> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None if !self.involves(i) => map.push(None),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Coefficients `c_0..c_d` if `self` involves at most the variable `idx`.
    pub fn univariate_coeffs(&self, idx: usize) -> Option<Vec<GaussianRational>> {
        let mut out: Vec<GaussianRational> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, &e)| j != idx && e > 0) {
                return None;
            }
            let e = m.0[idx] as usize;
            if out.len() <= e {
                out.resize(e + 1, GaussianRational::zero());
            }
            out[e] = c.clone();
        }
        Some(out)
    }

    /// The polynomial `Σ c_k var^k` over `vars`.
    pub fn from_univariate(vars: &[String], idx: usize, coeffs: &[GaussianRational]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[idx] = k as u32;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Remainder of `self` modulo a univariate polynomial `g(var)` with
    /// constant coefficients (every power `var^e`, `e ≥ deg g`, is reduced).
    pub fn reduce_univariate(&self, idx: usize, g: &[GaussianRational]) -> MultiPoly {
        let d = g.len().saturating_sub(1);
        if d == 0 {
            return self.zero_like();
        }
        let lc_inv = g[d].inv().expect("nonzero leading coefficient");
        let tail: Vec<GaussianRational> = g[..d].iter().map(|c| -(c * &lc_inv)).collect();
        // Bucket by exponent of `var`, fold from the top.
        let mut buckets: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            buckets.entry(e).or_insert_with(|| self.zero_like()).add_term(m2, c.clone());
        }
        while let Some((&e, _)) = buckets.iter().next_back() {
            if (e as usize) < d {
                break;
            }
            let coeff = buckets.remove(&e).expect("present");
            let base = e - d as u32;
            for (k, t) in tail.iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                let slot = buckets.entry(base + k as u32).or_insert_with(|| self.zero_like());
                *slot = &*slot + &coeff.scale(t);
            }
        }
        let mut out = self.zero_like();
        for (e, coeff) in buckets {
            for (mut m, c) in coeff.terms {
                m.0[idx] = e;
                out.add_term(m, c);
            }
        }
        out
    }

    /// Sum of the terms whose exponent vector satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Homogenises with a new trailing variable `h`.
    pub fn homogenize(&self, h: &str) -> MultiPoly {
        let mut vars = self.vars.to_vec();
        vars.push(h.to_string());
        let d = self.total_degree();
        let mut out = MultiPoly::zero(&vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `(exponent vector, coefficient)` pairs in descending print order.
    fn print_order(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter().rev()
    }
}

fn monomial_string(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(&m.0)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    parts.join("*")
}

/// Splits a coefficient into (negative?, magnitude text). Magnitude text is
/// empty for a unit real coefficient in front of a non-constant monomial.
pub(crate) fn signed_coefficient(c: &GaussianRational, has_monomial: bool) -> (bool, String) {
    if c.is_real() {
        let neg = c.re().is_negative();
        let mag = c.re().abs();
        if mag.is_one() && has_monomial {
            (neg, String::new())
        } else {
            (neg, fmt_rational(&mag))
        }
    } else if c.re().is_zero() {
        let neg = c.im().is_negative();
        let mag = c.im().abs();
        if mag.is_one() {
            (neg, "i".into())
        } else {
            (neg, format!("{}*i", fmt_rational(&mag)))
        }
    } else {
        (false, c.to_string())
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical form: descending graded-lex order, grammar-compatible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.print_order().enumerate() {
            let mono = monomial_string(&self.vars, m);
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

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.vars.join(","))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched variable lists; see [`MultiPoly::checked_add`].
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.checked_add(o).expect("polynomial addition over different variable lists")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.checked_sub(o).expect("polynomial subtraction over different variable lists")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.checked_mul(o).expect("polynomial product over different variable lists")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-GaussianRational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
