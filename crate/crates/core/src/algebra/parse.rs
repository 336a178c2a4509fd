//! Recursive-descent parser for the polynomial text grammar.
//!
//! Terms are joined by `+`/`-`; a term is a `*`-separated product of
//! coefficients (`INT`, `INT/INT`, `i`, parenthesised sums) and powers
//! `var^exp`. Variables match `[A-Za-z][A-Za-z0-9_]*`; `i` is reserved for
//! the imaginary unit. Whitespace is insignificant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// Sparse map from (possibly negative) exponent vectors to coefficients.
pub(crate) type LaurentTerms = BTreeMap<Vec<i64>, GaussianRational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{other}`") });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a [String],
    allow_negative: bool,
}

fn single(n: usize, exps: Vec<i64>, c: GaussianRational) -> LaurentTerms {
    debug_assert_eq!(exps.len(), n);
    let mut m = LaurentTerms::new();
    if !c.is_zero() {
        m.insert(exps, c);
    }
    m
}

fn add_into(acc: &mut LaurentTerms, other: LaurentTerms, negate: bool) {
    for (e, c) in other {
        let c = if negate { -c } else { c };
        let slot = acc.entry(e.clone()).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            acc.remove(&e);
        }
    }
}

fn mul_terms(a: &LaurentTerms, b: &LaurentTerms) -> LaurentTerms {
    let mut out = LaurentTerms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_into(&mut out, single(ea.len(), e, ca * cb), false);
        }
    }
    out
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn constant(&self, c: GaussianRational) -> LaurentTerms {
        single(self.vars.len(), vec![0; self.vars.len()], c)
    }

    fn expr(&mut self) -> Result<LaurentTerms> {
        let mut acc = LaurentTerms::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.at += 1;
            }
            Some(Tok::Plus) => self.at += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            add_into(&mut acc, t, negate);
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => break,
            }
            self.at += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentTerms> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            let f = self.factor()?;
            acc = mul_terms(&acc, &f);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64> {
        let negative = if self.peek() == Some(&Tok::Minus) {
            if !self.allow_negative {
                return self.err("negative exponent not allowed here");
            }
            self.at += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let v: i64 = match i64::try_from(&n) {
                    Ok(v) if v <= u32::MAX as i64 => v,
                    _ => return self.err("exponent too large"),
                };
                self.at += 1;
                Ok(if negative { -v } else { v })
            }
            _ => self.err("expected integer exponent"),
        }
    }

    fn factor(&mut self) -> Result<LaurentTerms> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.at += 1;
                            q /= BigRational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return self.err("zero denominator"),
                        _ => return self.err("expected integer denominator"),
                    }
                }
                let base = self.constant(q.into());
                self.maybe_power(base)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == "i" {
                    let base = self.constant(GaussianRational::i());
                    return self.maybe_power(base);
                }
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(idx) => idx,
                    None => return Err(Error::UnknownVariable(name)),
                };
                let mut e = 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.at += 1;
                    e = self.exponent()?;
                }
                let mut exps = vec![0; self.vars.len()];
                exps[idx] = e;
                Ok(single(self.vars.len(), exps, GaussianRational::one()))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                self.maybe_power(inner)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }

    fn maybe_power(&mut self, base: LaurentTerms) -> Result<LaurentTerms> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        let e = self.exponent()?;
        if e < 0 {
            return Err(Error::Syntax { pos, msg: "negative power of a compound factor".into() });
        }
        let mut acc = self.constant(GaussianRational::one());
        for _ in 0..e {
            acc = mul_terms(&acc, &base);
        }
        Ok(acc)
    }
}

/// Parses `text` over the ordered variable list. Negative exponents on bare
/// variables are accepted only when `allow_negative` is set.
pub(crate) fn parse_terms(text: &str, vars: &[String], allow_negative: bool) -> Result<LaurentTerms> {
    if let Some(bad) = vars.iter().find(|v| !valid_name(v)) {
        return Err(Error::Validation(format!("invalid variable name `{bad}`")));
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.chars().count(), vars, allow_negative };
    if p.toks.is_empty() {
        return p.err("empty input");
    }
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// `[A-Za-z][A-Za-z0-9_]*`, excluding the reserved `i`.
pub fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    name != "i" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
