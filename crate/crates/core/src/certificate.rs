//! Machine-readable verdicts shared by every verification routine.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{GaussianRational, MultiPoly};

pub const CERT_SCHEMA: &str = "cert/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Smooth,
    OnlySingularAt(Vec<Vec<GaussianRational>>),
    Certified,
    Fail,
    Inconclusive,
}

impl Status {
    /// Everything except FAIL and INCONCLUSIVE.
    pub fn is_success(&self) -> bool {
        !matches!(self, Status::Fail | Status::Inconclusive)
    }
}

fn fmt_point(p: &[GaussianRational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("PASS"),
            Status::Smooth => f.write_str("SMOOTH"),
            Status::OnlySingularAt(pts) => {
                let pts: Vec<String> = pts.iter().map(|p| fmt_point(p)).collect();
                write!(f, "ONLY_SINGULAR_AT[{}]", pts.join(", "))
            }
            Status::Certified => f.write_str("CERTIFIED"),
            Status::Fail => f.write_str("FAIL"),
            Status::Inconclusive => f.write_str("INCONCLUSIVE"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_display<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// One branch alternative: a variable vanishes, or is a root of a
/// univariate polynomial in that variable alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchConstraint {
    pub variable: String,
    #[serde(rename = "root_of", serialize_with = "ser_opt_display")]
    pub root_of: Option<MultiPoly>,
}

impl BranchConstraint {
    pub fn zero(variable: &str) -> Self {
        BranchConstraint { variable: variable.into(), root_of: None }
    }

    pub fn root_of(variable: &str, poly: MultiPoly) -> Self {
        BranchConstraint { variable: variable.into(), root_of: Some(poly) }
    }
}

impl fmt::Display for BranchConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root_of {
            None => write!(f, "{} = 0", self.variable),
            Some(p) => write!(f, "{} : {} = 0", self.variable, p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LeafKind {
    /// A nonzero constant appeared in the reduced system.
    Contradiction,
    /// An iterated resultant over the branch's root constraints is nonzero.
    ResultantNonzero,
    /// The branch is a claimed singular point and the system vanishes there.
    Claimed,
    /// The system vanishes on the branch off the claimed set.
    SingularWitness,
    /// Neither refuted nor confirmed.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafOutcome {
    pub kind: LeafKind,
    /// Exact certificate value (reduced constant or resultant).
    pub value: Option<String>,
    pub detail: String,
    /// Number of candidate points the branch stands for (with multiplicity).
    pub points: u64,
}

/// A node of the branch tree. Inner nodes record the polynomial they split
/// on; every child carries the constraint it added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchNode {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<BranchConstraint>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_display")]
    pub split_on: Option<MultiPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<LeafOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<BranchNode>,
}

impl BranchNode {
    /// All leaves in depth-first order, with the constraint path to each.
    pub fn leaves(&self) -> Vec<(Vec<&BranchConstraint>, &LeafOutcome)> {
        let mut out = Vec::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect<'a>(&'a self, path: &mut Vec<&'a BranchConstraint>, out: &mut Vec<(Vec<&'a BranchConstraint>, &'a LeafOutcome)>) {
        if let Some(c) = &self.constraint {
            path.push(c);
        }
        if let Some(o) = &self.outcome {
            out.push((path.clone(), o));
        }
        for child in &self.children {
            child.collect(path, out);
        }
        if self.constraint.is_some() {
            path.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub command: String,
    pub params: BTreeMap<String, String>,
    #[serde(serialize_with = "ser_display")]
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchNode>,
    pub values: BTreeMap<String, String>,
    pub justification: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Certificate {
    pub fn new(command: &str, status: Status) -> Self {
        Certificate {
            schema: CERT_SCHEMA,
            command: command.into(),
            params: BTreeMap::new(),
            status,
            branches: Vec::new(),
            values: BTreeMap::new(),
            justification: Vec::new(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.values.insert(key.into(), value.to_string());
    }

    pub fn justify(&mut self, line: impl Into<String>) {
        self.justification.push(line.into());
    }

    /// Leaves of every branch tree, depth-first.
    pub fn leaves(&self) -> Vec<(Vec<&BranchConstraint>, &LeafOutcome)> {
        self.branches.iter().flat_map(BranchNode::leaves).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }
}
