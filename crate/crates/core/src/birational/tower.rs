//! The k-step resolution tower: point blow-ups `g_j` of the ambient charts,
//! blow-ups `f_j` along the surfaces `S_j`, and the maps `h_j` closing each
//! square `f_j ∘ h_j = g_j ∘ f_{j−1}`.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

use super::blowup::{
    center_strict_transform, codim2_blowup_charts, coordinate_blowup_chart, point_blowup_charts, straighten_center,
    strict_transform, strict_transform_in, BlowupKind, BlowupStep, Hypersurface, Straightening, SurfaceCenter,
};
use super::chart::{compose_maps, first_mismatch, Chart, ChartLevel, SubstitutionMap};
use crate::algebra::{GaussianRational, MultiPoly};
use num_traits::Zero;
use crate::error::{Error, Result};

pub const TOWER_SCHEMA: &str = "tower/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCheck {
    pub level: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// `C_j = f_j⁻¹(P_j)`, a ℙ¹ covered by the two codimension-2 charts; `t_j`
/// (resp. `s_j`) is the fiber coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalCurve {
    pub charts: [String; 2],
    pub fiber_coordinates: [String; 2],
    /// Equations of the curve in each chart.
    pub equations: [Vec<MultiPoly>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub j: u32,
    pub chart: Chart,
    pub y: Hypersurface,
    pub center: SurfaceCenter,
    /// `P_j`, the origin of `U_j`; absent at level 0 where `Y_0` is smooth.
    pub point: Option<Vec<GaussianRational>>,
    pub straightening: Straightening,
    /// Blow-up of the straightened chart along `S_j` (charts T, S).
    pub f_step: BlowupStep,
    /// Strict transforms `X_j` in the T and S charts.
    pub x: [Hypersurface; 2],
    pub x_multiplicity: [u32; 2],
    pub curve: Option<ExceptionalCurve>,
    /// Point blow-up of `U_j` at `P_j`; chart 4 is `U_{j−1}` (`j ≥ 1`).
    pub g_step: Option<BlowupStep>,
    /// Multiplicity of `Y_j` along `P_j` (strict transform in chart 4).
    pub y_multiplicity: Option<u32>,
    /// `h_j` on the T and S charts of level `j−1` (`j ≥ 1`).
    pub h_steps: Vec<BlowupStep>,
}

impl TowerLevel {
    /// `f_j` on chart T (`idx = 0`) or S (`idx = 1`), as a map into `U_j`.
    pub fn f_map(&self, idx: usize) -> Result<SubstitutionMap> {
        compose_maps(&self.straightening.forward, &self.f_step.charts[idx].map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub k: u32,
    /// Levels ordered `j = k, k−1, …, 0`.
    pub levels: Vec<TowerLevel>,
    pub checks: Vec<TowerCheck>,
}

fn level_vars(j: u32, k: u32) -> Vec<String> {
    if j == k {
        (1..=4).map(|i| format!("z{i}")).collect()
    } else {
        (1..=4).map(|i| format!("u{i}_{j}")).collect()
    }
}

fn with_level(j: u32, stems: &[&str]) -> Vec<String> {
    stems.iter().map(|s| format!("{s}_{j}")).collect()
}

/// `u1² + u2² + u3² − u4^{2j}` on `chart`.
pub fn y_shape(chart: &Chart, j: u32) -> Result<MultiPoly> {
    let v = &chart.variables;
    chart.parse(&format!("{}^2 + {}^2 + {}^2 - {}^{}", v[0], v[1], v[2], v[3], 2 * j))
}

/// `{u1 − i·u2, u3 − u4^j}` on `chart`.
pub fn s_shape(chart: &Chart, j: u32) -> Result<[MultiPoly; 2]> {
    let v = &chart.variables;
    Ok([chart.parse(&format!("{} - i*{}", v[0], v[1]))?, chart.parse(&format!("{} - {}^{}", v[2], v[3], j))?])
}

/// The curve `{all coordinates but the fiber coordinate = 0}`; the fiber
/// coordinate sits at index 0 in chart T and 1 in chart S.
fn curve_equations(chart: &Chart, fiber: usize) -> Result<Vec<MultiPoly>> {
    chart.variables.iter().enumerate().filter(|&(i, _)| i != fiber).map(|(_, v)| chart.coordinate(v)).collect()
}

struct Recorder {
    checks: Vec<TowerCheck>,
}

impl Recorder {
    fn push(&mut self, level: u32, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(TowerCheck { level, name: name.into(), passed, detail: detail.into() });
    }
}

/// Builds and checks the tower for `Y_k = {z1² + z2² + z3² − z4^{2k} = 0}`.
pub fn build_tower(k: u32) -> Result<Tower> {
    if k < 1 {
        return Err(Error::Validation("tower needs k >= 1".into()));
    }
    let mut rec = Recorder { checks: Vec::new() };
    let top = Chart::new(format!("U{k}"), level_vars(k, k), ChartLevel::Level(k))?;
    let mut chart = top;
    let mut y = Hypersurface::new(chart.clone(), y_shape(&chart, k)?)?;
    let s = s_shape(&chart, k)?;
    let mut center = SurfaceCenter::new(s[0].clone(), s[1].clone())?;
    let mut levels = Vec::with_capacity(k as usize + 1);

    for j in (0..=k).rev() {
        let straightening = straighten_center(&center, &chart, &format!("V{j}"), &with_level(j, &["p", "q", "a", "b"]))?;
        let sv = &straightening.chart.variables;
        let straight_center = SurfaceCenter::new(straightening.chart.coordinate(&sv[0])?, straightening.chart.coordinate(&sv[1])?)?;
        let center_pulled: Vec<MultiPoly> =
            center.generators.iter().map(|g| straightening.forward.pullback(g)).collect::<Result<_>>()?;
        rec.push(j, "center-straightened", center_pulled == straight_center.generators.to_vec(), format!("S_{j} pulls back to {{{}, {}}}", center_pulled[0], center_pulled[1]));

        let f_step = codim2_blowup_charts(
            &straightening.chart,
            &straight_center,
            &format!("t_{j}"),
            &format!("s_{j}"),
            (&format!("N{j}.T"), &format!("N{j}.S")),
        )?;
        let cleared = f_step.overlap.as_ref().and_then(|o| o.cleared_exponents.clone());
        rec.push(j, "overlap-cocycle", cleared.is_some(), format!("t_{j} = 1/s_{j}; cleared exponents {cleared:?}"));
        rec.push(j, "f-exceptional-divides-center", f_step.exceptional_divides_center()?, "");

        let y_straight = Hypersurface::new(straightening.chart.clone(), straightening.forward.pullback(&y.equation)?)?;
        let (xt, mt) = strict_transform(&y_straight, &f_step, 0)?;
        let (xs, ms) = strict_transform(&y_straight, &f_step, 1)?;
        rec.push(j, "x-multiplicity", mt == 1 && ms == 1, format!("T: {mt}, S: {ms}"));

        let point = (j >= 1).then(|| chart.origin());
        let mut curve = None;
        if let Some(p) = &point {
            let on_s = center.contains(p);
            let on_y = y.equation.evaluate(p).is_zero();
            rec.push(j, "point-on-center-and-y", on_s && on_y, format!("P_{j} = origin: on S_{j} {on_s}, on Y_{j} {on_y}"));
            let tc = &f_step.charts[0].chart;
            let sc = &f_step.charts[1].chart;
            let eq_t = curve_equations(tc, 0)?;
            let eq_s = curve_equations(sc, 1)?;
            // C_j ⊂ X_j, and f_j maps C_j to P_j: restricted to the curve everything vanishes.
            let restrict = |f: &MultiPoly, fiber: usize| {
                (0..4).filter(|&i| i != fiber).fold(f.clone(), |acc, i| acc.specialize(i, &GaussianRational::from_int(0)))
            };
            let in_x = restrict(&xt.equation, 0).is_zero() && restrict(&xs.equation, 1).is_zero();
            let mut to_point = true;
            for idx in 0..2 {
                let fm = compose_maps(&straightening.forward, &f_step.charts[idx].map)?;
                to_point &= fm.assignment.iter().all(|a| restrict(a, idx).is_zero());
            }
            rec.push(j, "curve-in-x-over-point", in_x && to_point, format!("C_{j} = {{{} = 0}} in {}", tc.variables[1..].join(" = "), tc.id));
            curve = Some(ExceptionalCurve {
                charts: [tc.id.clone(), sc.id.clone()],
                fiber_coordinates: [tc.variables[0].clone(), sc.variables[1].clone()],
                equations: [eq_t, eq_s],
            });
        }

        let mut level = TowerLevel {
            j,
            chart: chart.clone(),
            y: y.clone(),
            center: center.clone(),
            point,
            straightening,
            f_step,
            x: [xt, xs],
            x_multiplicity: [mt, ms],
            curve,
            g_step: None,
            y_multiplicity: None,
            h_steps: Vec::new(),
        };

        if j >= 1 {
            let below = level_vars(j - 1, k);
            let g = point_blowup_charts(&chart, &below, |i| if i == 4 { format!("U{}", j - 1) } else { format!("G{j}.{i}") })?;
            rec.push(j, "g-exceptional-divides-center", g.exceptional_divides_center()?, "");
            let (y_next, mult) = strict_transform(&y, &g, 3)?;
            let expected = y_shape(&y_next.chart, j - 1)?;
            rec.push(j - 1, "y-multiplicity", mult == 2, format!("Y_{j} has multiplicity {mult} at P_{j}"));
            rec.push(j - 1, "y-shape", y_next.equation == expected, format!("Y_{} = {}", j - 1, y_next.equation));
            let (next_center, mults) = center_strict_transform(&center, &g.charts[3])?;
            let expected = s_shape(&y_next.chart, j - 1)?;
            rec.push(
                j - 1,
                "s-shape",
                next_center.generators == expected && mults == [1, 1],
                format!("S_{} = {{{}, {}}}, multiplicities {mults:?}", j - 1, next_center.generators[0], next_center.generators[1]),
            );
            level.y_multiplicity = Some(mult);
            level.g_step = Some(g);
            chart = y_next.chart.clone();
            y = y_next;
            center = next_center;
        } else {
            let expected = chart.parse(&format!("{}^2 + {}^2 + {}^2 - 1", chart.variables[0], chart.variables[1], chart.variables[2]))?;
            rec.push(0, "y0-final", y.equation == expected, format!("Y_0 = {}", y.equation));
        }
        levels.push(level);
    }

    // h_j: blow-up of level j's T (resp. S) chart along C_j, landing in level j−1's chart.
    for idx in 0..levels.len() - 1 {
        let j = levels[idx].j;
        let mut h_steps = Vec::with_capacity(2);
        for c in 0..2 {
            let base = levels[idx].f_step.charts[c].chart.clone();
            let new_chart = levels[idx + 1].f_step.charts[c].chart.clone();
            let center_vars: Vec<String> = base.variables.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, v)| v.clone()).collect();
            let exceptional = base.variables[3].clone();
            let label = format!("h_{j}[{}]", ["T", "S"][c]);
            let hc = coordinate_blowup_chart(&base, &center_vars, &exceptional, new_chart, &label)?;
            let step = BlowupStep { kind: BlowupKind::Curve, base, center: center_vars, charts: vec![hc], overlap: None };
            rec.push(j, "h-exceptional-divides-center", step.exceptional_divides_center()?, label.clone());
            // X_{j−1} is the strict transform of X_j under h_j.
            let (xh, _) = strict_transform_in(&levels[idx].x[c], &step.charts[0])?;
            let agrees = xh.equation == levels[idx + 1].x[c].equation;
            rec.push(j, "x-strict-transform-under-h", agrees, format!("{label}: {}", xh.equation));
            h_steps.push(step);
        }
        levels[idx].h_steps = h_steps;
    }

    let mut tower = Tower { k, levels, checks: rec.checks };
    let squares = tower.square_checks()?;
    tower.checks.extend(squares);

    let mut ids = HashSet::new();
    let mut unique = true;
    for l in &tower.levels {
        let mut all = vec![&l.chart.id, &l.straightening.chart.id];
        all.extend(l.f_step.charts.iter().map(|c| &c.chart.id));
        if let Some(g) = &l.g_step {
            // chart 4 is the next level's U chart
            all.extend(g.charts[..3].iter().map(|c| &c.chart.id));
        }
        for id in all {
            unique &= ids.insert(id.clone());
        }
    }
    tower.checks.push(TowerCheck { level: k, name: "chart-ids-unique".into(), passed: unique, detail: format!("{} charts", ids.len()) });
    Ok(tower)
}

impl Tower {
    pub fn level(&self, j: u32) -> &TowerLevel {
        &self.levels[(self.k - j) as usize]
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&TowerCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// `Y_0`, the final smooth strict transform.
    pub fn y0(&self) -> &Hypersurface {
        &self.level(0).y
    }

    /// The composites `f_j ∘ h_j` and `g_j ∘ f_{j−1}` for square `j` on
    /// chart T (`idx = 0`) or S (`idx = 1`).
    pub fn square_composites(&self, j: u32, idx: usize) -> Result<(SubstitutionMap, SubstitutionMap)> {
        if j < 1 || j > self.k {
            return Err(Error::Validation(format!("no square at level {j}")));
        }
        let upper = self.level(j);
        let lower = self.level(j - 1);
        let g = upper.g_step.as_ref().expect("levels j >= 1 carry g");
        let left = compose_maps(&upper.f_map(idx)?, &upper.h_steps[idx].charts[0].map)?;
        let right = compose_maps(&g.charts[3].map, &lower.f_map(idx)?)?;
        Ok((left, right))
    }

    fn square_checks(&self) -> Result<Vec<TowerCheck>> {
        let mut out = Vec::new();
        for j in (1..=self.k).rev() {
            for idx in 0..2 {
                let (left, right) = self.square_composites(j, idx)?;
                let mismatch = first_mismatch(&left, &right)?;
                let detail = match &mismatch {
                    None => format!("{} -> {}: agree", left.source.id, left.target.id),
                    Some((v, a, b)) => format!("{v}: {a} != {b}"),
                };
                out.push(TowerCheck { level: j, name: format!("square-{}", ["T", "S"][idx]), passed: mismatch.is_none(), detail });
            }
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> Value {
        let map_json = |m: &SubstitutionMap| {
            json!({
                "label": m.label,
                "source": m.source.id,
                "target": m.target.id,
                "assignment": m.target.variables.iter().zip(&m.assignment)
                    .map(|(v, a)| json!([v, a.to_string()])).collect::<Vec<_>>(),
            })
        };
        let chart_json = |c: &Chart| json!({ "id": c.id, "variables": c.variables, "level": c.level });
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|l| {
                json!({
                    "j": l.j,
                    "chart": chart_json(&l.chart),
                    "y": l.y.equation.to_string(),
                    "center": l.center.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "point": l.point.as_ref().map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>()),
                    "straightening": map_json(&l.straightening.forward),
                    "f_charts": l.f_step.charts.iter().map(|c| json!({
                        "chart": chart_json(&c.chart),
                        "map": map_json(&c.map),
                        "exceptional": c.exceptional,
                    })).collect::<Vec<_>>(),
                    "x": l.x.iter().map(|h| h.equation.to_string()).collect::<Vec<_>>(),
                    "x_multiplicity": l.x_multiplicity,
                    "curve": l.curve.as_ref().map(|c| json!({
                        "charts": c.charts,
                        "fiber_coordinates": c.fiber_coordinates,
                        "equations": c.equations.iter().map(|e| e.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })),
                    "g": l.g_step.as_ref().map(|g| map_json(&g.charts[3].map)),
                    "y_multiplicity": l.y_multiplicity,
                    "h": l.h_steps.iter().map(|h| map_json(&h.charts[0].map)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "schema": TOWER_SCHEMA,
            "k": self.k,
            "levels": levels,
            "checks": self.checks,
            "passed": self.all_passed(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("tower serialises")
    }
}
