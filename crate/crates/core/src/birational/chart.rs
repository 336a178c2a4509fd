//! Named coordinate charts and polynomial maps between them.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{valid_name, GaussianRational, MultiPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartLevel {
    Level(u32),
    LocalModel,
}

/// A coordinate system: an id plus an ordered list of unique variable names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub id: String,
    pub variables: Vec<String>,
    pub level: ChartLevel,
}

impl Chart {
    pub fn new(id: impl Into<String>, variables: Vec<String>, level: ChartLevel) -> Result<Self> {
        let id = id.into();
        let mut seen = HashSet::new();
        for v in &variables {
            if !valid_name(v) {
                return Err(Error::Validation(format!("chart {id}: invalid variable name `{v}`")));
            }
            if !seen.insert(v) {
                return Err(Error::Validation(format!("chart {id}: duplicate variable `{v}`")));
            }
        }
        Ok(Chart { id, variables, level })
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    /// The coordinate function `name` as a polynomial on this chart.
    pub fn coordinate(&self, name: &str) -> Result<MultiPoly> {
        MultiPoly::var(&self.variables, name)
    }

    pub fn coordinates(&self) -> Vec<MultiPoly> {
        self.variables.iter().map(|v| MultiPoly::var(&self.variables, v).expect("own variable")).collect()
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly> {
        MultiPoly::parse(text, &self.variables)
    }

    pub fn origin(&self) -> Vec<GaussianRational> {
        vec![GaussianRational::from_int(0); self.dim()]
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.id, self.variables.join(", "))
    }
}

/// A polynomial map `source → target`: each target coordinate is given as
/// a polynomial in the source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionMap {
    pub source: Chart,
    pub target: Chart,
    /// One entry per target variable, over the source variables.
    pub assignment: Vec<MultiPoly>,
    pub label: String,
}

impl SubstitutionMap {
    pub fn new(source: Chart, target: Chart, assignment: Vec<MultiPoly>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::Validation("map label must be nonempty".into()));
        }
        if assignment.len() != target.dim() {
            let missing = target.variables.get(assignment.len()).cloned().unwrap_or_default();
            return Err(Error::UnassignedVariable(missing));
        }
        for a in &assignment {
            if a.variables() != source.variables.as_slice() {
                return Err(Error::VariableMismatch { left: a.variables().to_vec(), right: source.variables.clone() });
            }
        }
        Ok(SubstitutionMap { source, target, assignment, label })
    }

    /// Builds a map from one text polynomial per target variable.
    pub fn parse(source: &Chart, target: &Chart, images: &[&str], label: &str) -> Result<Self> {
        let assignment = images.iter().map(|s| source.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), assignment, label)
    }

    pub fn identity(chart: &Chart) -> Self {
        SubstitutionMap { source: chart.clone(), target: chart.clone(), assignment: chart.coordinates(), label: "id".into() }
    }

    /// Pulls a polynomial on the target chart back to the source chart.
    pub fn pullback(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.variables() != self.target.variables.as_slice() {
            return Err(Error::ChartMismatch(format!(
                "polynomial over [{}] pulled back along {} with target {}",
                f.variables().join(", "),
                self.label,
                self.target
            )));
        }
        f.substitute(&self.source.variables, &self.assignment)
    }

    pub fn image_of(&self, var: &str) -> Result<&MultiPoly> {
        Ok(&self.assignment[self.target.index_of(var)?])
    }

    /// Evaluates the map at a source point.
    pub fn apply(&self, point: &[GaussianRational]) -> Vec<GaussianRational> {
        self.assignment.iter().map(|a| a.evaluate(point)).collect()
    }
}

impl fmt::Display for SubstitutionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {} {{", self.label, self.source.id, self.target.id)?;
        for (i, (v, a)) in self.target.variables.iter().zip(&self.assignment).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} = {a}")?;
        }
        f.write_str("}")
    }
}

/// `outer ∘ inner`, defined when `inner.target == outer.source`.
pub fn compose_maps(outer: &SubstitutionMap, inner: &SubstitutionMap) -> Result<SubstitutionMap> {
    if inner.target != outer.source {
        return Err(Error::ChartMismatch(format!(
            "cannot compose {} after {}: {} != {}",
            outer.label, inner.label, inner.target, outer.source
        )));
    }
    let assignment = outer
        .assignment
        .iter()
        .map(|a| a.substitute(&inner.source.variables, &inner.assignment))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubstitutionMap {
        source: inner.source.clone(),
        target: outer.target.clone(),
        assignment,
        label: format!("{}∘{}", outer.label, inner.label),
    })
}

/// Exact per-variable equality of two maps with the same source and target.
pub fn maps_equal(a: &SubstitutionMap, b: &SubstitutionMap) -> Result<bool> {
    Ok(first_mismatch(a, b)?.is_none())
}

/// The first target variable on which two maps disagree.
pub fn first_mismatch(a: &SubstitutionMap, b: &SubstitutionMap) -> Result<Option<(String, MultiPoly, MultiPoly)>> {
    if a.source != b.source || a.target != b.target {
        return Err(Error::ChartMismatch(format!(
            "{} and {} have different charts ({} -> {} vs {} -> {})",
            a.label, b.label, a.source.id, a.target.id, b.source.id, b.target.id
        )));
    }
    Ok(a.target
        .variables
        .iter()
        .zip(a.assignment.iter().zip(&b.assignment))
        .find(|(_, (x, y))| x != y)
        .map(|(v, (x, y))| (v.clone(), x.clone(), y.clone())))
}

/// A map whose images are `numerator / d^exponent` for a single source
/// variable `d`; enough for the `t = 1/s` chart overlaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialDenominatorMap {
    pub source: Chart,
    pub target: Chart,
    pub denominator: String,
    pub numerators: Vec<MultiPoly>,
    pub exponents: Vec<u32>,
}

impl MonomialDenominatorMap {
    /// Pulls a polynomial on the target back along the rational map. The
    /// result is `(numerator, d)` meaning `numerator / denominator^d`, with
    /// `d` minimal.
    pub fn pullback(&self, f: &MultiPoly) -> Result<(MultiPoly, u32)> {
        let depth: u32 = f
            .terms()
            .map(|(m, _)| m.0.iter().zip(&self.exponents).map(|(e, x)| e * x).sum::<u32>())
            .max()
            .unwrap_or(0);
        let dpoly = self.source.coordinate(&self.denominator)?;
        let mut out = MultiPoly::zero(&self.source.variables);
        for (m, c) in f.terms() {
            let shift: u32 = m.0.iter().zip(&self.exponents).map(|(e, x)| e * x).sum();
            let mut t = MultiPoly::constant(&self.source.variables, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &self.numerators[j].pow(e);
                }
            }
            out = &out + &(&t * &dpoly.pow(depth - shift));
        }
        if out.is_zero() {
            return Ok((out, 0));
        }
        let (power, reduced) = out.extract_variable_power(&self.denominator)?;
        if power >= depth {
            Ok((&reduced * &dpoly.pow(power - depth), 0))
        } else {
            Ok((reduced, depth - power))
        }
    }
}

/// Checks `outer ∘ rational == expected` as rational maps: every composite
/// image `N / d^e` (minimal `e`) must satisfy `N == d^e * expected`.
/// Returns the cleared denominator exponent per target variable.
pub fn rational_composite_agrees(
    outer: &SubstitutionMap,
    rational: &MonomialDenominatorMap,
    expected: &SubstitutionMap,
) -> Result<Option<Vec<u32>>> {
    if rational.target != outer.source || expected.source != rational.source || expected.target != outer.target {
        return Err(Error::ChartMismatch(format!("overlap check for {} has incompatible charts", outer.label)));
    }
    let dpoly = rational.source.coordinate(&rational.denominator)?;
    let mut exps = Vec::with_capacity(outer.assignment.len());
    for (a, e) in outer.assignment.iter().zip(&expected.assignment) {
        let (num, d) = rational.pullback(a)?;
        if num != &dpoly.pow(d) * e {
            return Ok(None);
        }
        exps.push(d);
    }
    Ok(Some(exps))
}
