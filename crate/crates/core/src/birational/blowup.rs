//! Blow-up charts along coordinate centers, triangular surface centers and
//! strict transforms.

use num_traits::Zero;
use serde::Serialize;

use super::chart::{compose_maps, maps_equal, rational_composite_agrees, Chart, MonomialDenominatorMap, SubstitutionMap};
use crate::algebra::{GaussianRational, MultiPoly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlowupKind {
    Point,
    Codim2,
    Curve,
}

/// A hypersurface given by one equation on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    pub chart: Chart,
    pub equation: MultiPoly,
}

impl Hypersurface {
    pub fn new(chart: Chart, equation: MultiPoly) -> Result<Self> {
        if equation.is_zero() {
            return Err(Error::ZeroPolynomial("hypersurface equation"));
        }
        if equation.variables() != chart.variables.as_slice() {
            return Err(Error::ChartMismatch(format!("equation variables do not match chart {}", chart)));
        }
        Ok(Hypersurface { chart, equation })
    }

    pub fn parse(chart: &Chart, text: &str) -> Result<Self> {
        Self::new(chart.clone(), chart.parse(text)?)
    }
}

/// A smooth codimension-2 center `{p = q = 0}` whose generators have the
/// triangular form `x − r` with `r` free of both isolated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCenter {
    pub generators: [MultiPoly; 2],
    /// Variable isolated by each generator.
    pub isolated: [String; 2],
    /// `r_i` with `generator_i = c_i (isolated_i − r_i)`.
    rests: [MultiPoly; 2],
}

/// `g = c·(x − r)` with `r` free of `x`: returns `r`.
fn isolate(g: &MultiPoly, idx: usize) -> Option<MultiPoly> {
    let mut lin = None;
    for (m, c) in g.terms() {
        if m.0[idx] == 0 {
            continue;
        }
        if m.0[idx] != 1 || m.degree() != 1 || lin.is_some() {
            return None;
        }
        lin = Some(c.clone());
    }
    let c = lin?;
    let x = MultiPoly::var(g.variables(), &g.variables()[idx]).ok()?;
    Some(&x - &g.scale(&c.inv()?))
}

impl SurfaceCenter {
    /// Detects the triangular solve order. Fails with `NotTriangular` when no
    /// pair of distinct isolated variables exists.
    pub fn new(p: MultiPoly, q: MultiPoly) -> Result<Self> {
        if p.variables() != q.variables() {
            return Err(Error::VariableMismatch { left: p.variables().to_vec(), right: q.variables().to_vec() });
        }
        let n = p.nvars();
        for i in 0..n {
            let Some(rp) = isolate(&p, i) else { continue };
            for j in (0..n).filter(|&j| j != i) {
                let Some(rq) = isolate(&q, j) else { continue };
                if rp.involves(j) || rq.involves(i) {
                    continue;
                }
                let names = [p.variables()[i].clone(), p.variables()[j].clone()];
                return Ok(SurfaceCenter { generators: [p, q], isolated: names, rests: [rp, rq] });
            }
        }
        Err(Error::NotTriangular(format!("{{{p}, {q}}} has no triangular solve order")))
    }

    pub fn parse(chart: &Chart, p: &str, q: &str) -> Result<Self> {
        Self::new(chart.parse(p)?, chart.parse(q)?)
    }

    pub fn rests(&self) -> &[MultiPoly; 2] {
        &self.rests
    }

    pub fn contains(&self, point: &[GaussianRational]) -> bool {
        self.generators.iter().all(|g| g.evaluate(point).is_zero())
    }
}


/// Result of straightening a triangular center: a chart whose first two
/// coordinates cut out the center, with maps both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Straightening {
    pub chart: Chart,
    /// straightened → ambient
    pub forward: SubstitutionMap,
    /// ambient → straightened
    pub inverse: SubstitutionMap,
}

/// Changes coordinates so that `center` becomes `{v1 = v2 = 0}`.
///
/// `names` lists the straightened chart's variables: `v1`, `v2`, then one
/// name per non-isolated ambient variable in ambient order.
pub fn straighten_center(center: &SurfaceCenter, ambient: &Chart, id: &str, names: &[String]) -> Result<Straightening> {
    if center.generators[0].variables() != ambient.variables.as_slice() {
        return Err(Error::ChartMismatch(format!("center does not live on {ambient}")));
    }
    if names.len() != ambient.dim() {
        return Err(Error::Validation(format!("need {} straightened names", ambient.dim())));
    }
    let chart = Chart::new(id, names.to_vec(), ambient.level.clone())?;
    let iso: Vec<usize> = center.isolated.iter().map(|v| ambient.index_of(v)).collect::<Result<_>>()?;
    let rest_idx: Vec<usize> = (0..ambient.dim()).filter(|i| !iso.contains(i)).collect();

    // Ambient variable -> straightened coordinate, with isolated ones sent to 0
    // (the rests do not involve them).
    let mut rename = vec![MultiPoly::zero(&chart.variables); ambient.dim()];
    for (k, &i) in rest_idx.iter().enumerate() {
        rename[i] = chart.coordinate(&names[k + 2])?;
    }
    let mut forward = rename.clone();
    for (slot, &i) in iso.iter().enumerate() {
        let r = center.rests[slot].substitute(&chart.variables, &rename)?;
        forward[i] = &chart.coordinate(&names[slot])? + &r;
    }
    let forward = SubstitutionMap::new(chart.clone(), ambient.clone(), forward, "straighten")?;

    let mut inverse = Vec::with_capacity(ambient.dim());
    for (slot, &i) in iso.iter().enumerate() {
        inverse.push(&ambient.coordinate(&ambient.variables[i])? - &center.rests[slot]);
    }
    for &i in &rest_idx {
        inverse.push(ambient.coordinate(&ambient.variables[i])?);
    }
    let inverse = SubstitutionMap::new(ambient.clone(), chart.clone(), inverse, "unstraighten")?;

    let there_and_back = compose_maps(&forward, &inverse)?;
    let back_and_there = compose_maps(&inverse, &forward)?;
    if !maps_equal(&there_and_back, &SubstitutionMap::identity(ambient))?
        || !maps_equal(&back_and_there, &SubstitutionMap::identity(&chart))?
    {
        return Err(Error::InternalInconsistent("straightening does not round-trip".into()));
    }
    Ok(Straightening { chart, forward, inverse })
}

/// One chart of a blow-up with its map to the base and its exceptional
/// coordinate (the exceptional divisor is `{exceptional = 0}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupChart {
    pub chart: Chart,
    pub map: SubstitutionMap,
    pub exceptional: String,
}

/// `t = 1/s` style overlap between the two charts of a codimension-2 blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    /// S-chart → T-chart, with a power of the S-chart's `s` in denominators.
    pub transition: MonomialDenominatorMap,
    /// Cleared denominator exponent per base variable, when the cocycle holds.
    pub cleared_exponents: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub kind: BlowupKind,
    pub base: Chart,
    /// The center is the common zero set of these base coordinates.
    pub center: Vec<String>,
    pub charts: Vec<BlowupChart>,
    pub overlap: Option<Overlap>,
}

impl BlowupStep {
    pub fn chart(&self, idx: usize) -> &BlowupChart {
        &self.charts[idx]
    }

    pub fn find_chart(&self, id: &str) -> Option<&BlowupChart> {
        self.charts.iter().find(|c| c.chart.id == id)
    }

    /// Every chart map pulls each center coordinate back to a multiple of
    /// the exceptional coordinate.
    pub fn exceptional_divides_center(&self) -> Result<bool> {
        for bc in &self.charts {
            for v in &self.center {
                let pulled = bc.map.pullback(&self.base.coordinate(v)?)?;
                let (mult, _) = pulled.extract_variable_power(&bc.exceptional)?;
                if mult == 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The chart of the blow-up of `base` along `{x = 0 : x ∈ center}` in which
/// `exceptional` generates the exceptional divisor. The new chart's variables
/// correspond positionally to the base variables.
pub fn coordinate_blowup_chart(base: &Chart, center: &[String], exceptional: &str, new_chart: Chart, label: &str) -> Result<BlowupChart> {
    if new_chart.dim() != base.dim() {
        return Err(Error::ChartMismatch(format!("{new_chart} and {base} differ in dimension")));
    }
    let e = base.index_of(exceptional)?;
    if !center.iter().any(|c| c == exceptional) {
        return Err(Error::Validation(format!("exceptional coordinate {exceptional} is not a center coordinate")));
    }
    for c in center {
        base.index_of(c)?;
    }
    let exc_new = new_chart.coordinate(&new_chart.variables[e])?;
    let assignment = base
        .variables
        .iter()
        .zip(&new_chart.variables)
        .map(|(bv, nv)| {
            let x = new_chart.coordinate(nv).expect("own variable");
            if bv != exceptional && center.contains(bv) {
                &x * &exc_new
            } else {
                x
            }
        })
        .collect();
    let map = SubstitutionMap::new(new_chart.clone(), base.clone(), assignment, label)?;
    let exceptional = new_chart.variables[e].clone();
    Ok(BlowupChart { chart: new_chart, map, exceptional })
}

/// All charts of the blow-up of the origin of `ambient`. Chart `i` (1-based)
/// has variables `names` and maps `z_j = u_j·u_i` (`j ≠ i`), `z_i = u_i`.
pub fn point_blowup_charts(ambient: &Chart, names: &[String], chart_id: impl Fn(usize) -> String) -> Result<BlowupStep> {
    if ambient.dim() < 2 {
        return Err(Error::Validation("point blow-up needs at least two coordinates".into()));
    }
    let mut charts = Vec::with_capacity(ambient.dim());
    for i in 0..ambient.dim() {
        let chart = Chart::new(chart_id(i + 1), names.to_vec(), ambient.level_below())?;
        let label = format!("blowup({})[{}]", ambient.id, i + 1);
        charts.push(coordinate_blowup_chart(ambient, &ambient.variables, &ambient.variables[i], chart, &label)?);
    }
    Ok(BlowupStep { kind: BlowupKind::Point, base: ambient.clone(), center: ambient.variables.clone(), charts, overlap: None })
}

impl Chart {
    fn level_below(&self) -> super::chart::ChartLevel {
        match self.level {
            super::chart::ChartLevel::Level(j) if j > 0 => super::chart::ChartLevel::Level(j - 1),
            ref other => other.clone(),
        }
    }
}

/// The two charts of the blow-up of a straightened chart along `{v1 = v2 = 0}`
/// where `v1, v2` are its first two coordinates.
///
/// Chart T replaces `v1` by `t` (`v1 = t·v2`, exceptional `v2`); chart S
/// replaces `v2` by `s` (`v2 = s·v1`, exceptional `v1`). The overlap
/// `t = 1/s, v2 = s·v1` is checked against both chart maps.
pub fn codim2_blowup_charts(
    straightened: &Chart,
    center: &SurfaceCenter,
    t_name: &str,
    s_name: &str,
    ids: (&str, &str),
) -> Result<BlowupStep> {
    if straightened.dim() < 2 {
        return Err(Error::Validation("codimension-2 blow-up needs at least two coordinates".into()));
    }
    let v1 = &straightened.variables[0];
    let v2 = &straightened.variables[1];
    for (g, v) in center.generators.iter().zip([v1, v2]) {
        if *g != straightened.coordinate(v)? {
            return Err(Error::Validation(format!("center not in straightened form: expected {v}, found {g}")));
        }
    }
    let center_vars = vec![v1.clone(), v2.clone()];

    let mut t_vars = straightened.variables.clone();
    t_vars[0] = t_name.to_string();
    let t_chart = Chart::new(ids.0, t_vars, straightened.level.clone())?;
    let t = coordinate_blowup_chart(straightened, &center_vars, v2, t_chart, &format!("blowup({})[T]", straightened.id))?;

    let mut s_vars = straightened.variables.clone();
    s_vars[1] = s_name.to_string();
    let s_chart = Chart::new(ids.1, s_vars, straightened.level.clone())?;
    let s = coordinate_blowup_chart(straightened, &center_vars, v1, s_chart, &format!("blowup({})[S]", straightened.id))?;

    // S → T: t = 1/s, v2 = s·v1, rest unchanged.
    let sc = &s.chart;
    let mut numerators = Vec::with_capacity(sc.dim());
    let mut exponents = Vec::with_capacity(sc.dim());
    numerators.push(MultiPoly::one(&sc.variables));
    exponents.push(1);
    numerators.push(&sc.coordinate(s_name)? * &sc.coordinate(v1)?);
    exponents.push(0);
    for v in &sc.variables[2..] {
        numerators.push(sc.coordinate(v)?);
        exponents.push(0);
    }
    let transition = MonomialDenominatorMap {
        source: sc.clone(),
        target: t.chart.clone(),
        denominator: s_name.to_string(),
        numerators,
        exponents,
    };
    let cleared_exponents = rational_composite_agrees(&t.map, &transition, &s.map)?;
    Ok(BlowupStep {
        kind: BlowupKind::Codim2,
        base: straightened.clone(),
        center: center_vars,
        charts: vec![t, s],
        overlap: Some(Overlap { transition, cleared_exponents }),
    })
}

/// Pull back and strip the largest power of the exceptional coordinate.
/// Returns the strict transform and the stripped multiplicity.
pub fn strict_transform_in(h: &Hypersurface, chart: &BlowupChart) -> Result<(Hypersurface, u32)> {
    if h.chart != chart.map.target {
        return Err(Error::ChartMismatch(format!("{} does not live on {}", h.equation, chart.map.target)));
    }
    let total = chart.map.pullback(&h.equation)?;
    if total.is_zero() {
        return Err(Error::ZeroPolynomial("pullback"));
    }
    let (mult, strict) = total.extract_variable_power(&chart.exceptional)?;
    Ok((Hypersurface::new(chart.chart.clone(), strict)?, mult))
}

/// Strict transform of `h` in chart `index` of `step`.
pub fn strict_transform(h: &Hypersurface, step: &BlowupStep, index: usize) -> Result<(Hypersurface, u32)> {
    let chart = step.charts.get(index).ok_or_else(|| Error::Validation(format!("no chart {index}")))?;
    strict_transform_in(h, chart)
}

/// Strict transform of a center generator-wise; the result must be
/// triangular again.
pub fn center_strict_transform(center: &SurfaceCenter, chart: &BlowupChart) -> Result<(SurfaceCenter, [u32; 2])> {
    let mut gens = Vec::with_capacity(2);
    let mut mults = [0; 2];
    for (slot, g) in center.generators.iter().enumerate() {
        let total = chart.map.pullback(g)?;
        let (m, strict) = total.extract_variable_power(&chart.exceptional)?;
        mults[slot] = m;
        gens.push(strict);
    }
    let q = gens.pop().expect("two");
    let p = gens.pop().expect("two");
    Ok((SurfaceCenter::new(p, q)?, mults))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var_names;
    use crate::birational::chart::ChartLevel;

    fn z4() -> Chart {
        Chart::new("M", var_names(&["z1", "z2", "z3", "z4"]), ChartLevel::Level(2)).unwrap()
    }

    fn u_names() -> Vec<String> {
        var_names(&["u1", "u2", "u3", "u4"])
    }

    #[test]
    fn point_chart_four_is_the_standard_chart() {
        let step = point_blowup_charts(&z4(), &u_names(), |i| format!("U.{i}")).unwrap();
        assert_eq!(step.charts.len(), 4);
        let c4 = step.chart(3);
        let expected = SubstitutionMap::parse(&c4.chart, &z4(), &["u1*u4", "u2*u4", "u3*u4", "u4"], "x").unwrap();
        assert_eq!(c4.map.assignment, expected.assignment);
        assert_eq!(c4.exceptional, "u4");
        let c1 = step.chart(0);
        let expected = SubstitutionMap::parse(&c1.chart, &z4(), &["u1", "u1*u2", "u1*u3", "u1*u4"], "x").unwrap();
        assert_eq!(c1.map.assignment, expected.assignment);
        assert!(step.exceptional_divides_center().unwrap());
    }

    #[test]
    fn exceptional_divisor_maps_into_center() {
        let step = point_blowup_charts(&z4(), &u_names(), |i| format!("U.{i}")).unwrap();
        let c4 = step.chart(3);
        // On {u4 = 0} every image coordinate vanishes.
        for a in &c4.map.assignment {
            assert!(a.specialize(3, &GaussianRational::from_int(0)).is_zero());
        }
    }

    #[test]
    fn straighten_defining_center() {
        let m = z4();
        let s2 = SurfaceCenter::parse(&m, "z1 - i*z2", "z3 - z4^2").unwrap();
        assert_eq!(s2.isolated, ["z1".to_string(), "z3".to_string()]);
        let st = straighten_center(&s2, &m, "V", &var_names(&["p", "q", "a", "b"])).unwrap();
        let expected = SubstitutionMap::parse(&st.chart, &m, &["p + i*a", "a", "q + b^2", "b"], "x").unwrap();
        assert_eq!(st.forward.assignment, expected.assignment);
        for (g, v) in s2.generators.iter().zip(["p", "q"]) {
            assert_eq!(st.forward.pullback(g).unwrap(), st.chart.coordinate(v).unwrap());
        }
    }

    #[test]
    fn straighten_plane_is_renaming() {
        let m = z4();
        let s = SurfaceCenter::parse(&m, "z3", "z4").unwrap();
        let st = straighten_center(&s, &m, "V", &var_names(&["v1", "v2", "x1", "x2"])).unwrap();
        let expected = SubstitutionMap::parse(&st.chart, &m, &["x1", "x2", "v1", "v2"], "x").unwrap();
        assert_eq!(st.forward.assignment, expected.assignment);
    }

    #[test]
    fn straighten_level_center() {
        let u = Chart::new("U1", var_names(&["u1", "u2", "u3", "u4"]), ChartLevel::Level(1)).unwrap();
        for j in 0..4 {
            let s = SurfaceCenter::parse(&u, "u1 - i*u2", &format!("u3 - u4^{j}")).unwrap();
            let st = straighten_center(&s, &u, "V", &var_names(&["p", "q", "a", "b"])).unwrap();
            let expected = SubstitutionMap::parse(&st.chart, &u, &["p + i*a", "a", &format!("q + b^{j}"), "b"], "x").unwrap();
            assert_eq!(st.forward.assignment, expected.assignment, "j={j}");
        }
    }

    #[test]
    fn non_triangular_center_is_rejected() {
        let m = z4();
        let err = SurfaceCenter::parse(&m, "z1^2 - z2", "z1*z3 - 1").unwrap_err();
        assert!(matches!(err, Error::NotTriangular(_)));
        // Both generators can only isolate the same variable.
        let err = SurfaceCenter::parse(&m, "z1 - z2^2", "z1 - z3^2 - z2^2*z3").unwrap_err();
        assert!(matches!(err, Error::NotTriangular(_)));
    }

    fn straightened_model(k: u32) -> (Chart, SurfaceCenter, MultiPoly) {
        let v = Chart::new("V", var_names(&["p", "q", "a", "b"]), ChartLevel::Level(k)).unwrap();
        let c = SurfaceCenter::parse(&v, "p", "q").unwrap();
        let f = v.parse(&format!("p*(p + 2*i*a) + q*(q + 2*b^{k})")).unwrap();
        (v, c, f)
    }

    #[test]
    fn codim2_charts_and_overlap() {
        let (v, c, _) = straightened_model(2);
        let step = codim2_blowup_charts(&v, &c, "t", "s", ("T", "S")).unwrap();
        let t = step.chart(0);
        assert_eq!(t.chart.variables, var_names(&["t", "q", "a", "b"]));
        let expected = SubstitutionMap::parse(&t.chart, &v, &["t*q", "q", "a", "b"], "x").unwrap();
        assert_eq!(t.map.assignment, expected.assignment);
        assert_eq!(t.exceptional, "q");
        let s = step.chart(1);
        let expected = SubstitutionMap::parse(&s.chart, &v, &["p", "s*p", "a", "b"], "x").unwrap();
        assert_eq!(s.map.assignment, expected.assignment);
        assert_eq!(s.exceptional, "p");
        // p = t·q = (1/s)(s·p) needs one power of s cleared; q = s·p needs none.
        assert_eq!(step.overlap.as_ref().unwrap().cleared_exponents, Some(vec![0, 0, 0, 0]));
        assert!(step.exceptional_divides_center().unwrap());
    }

    #[test]
    fn codim2_requires_straightened_center() {
        let (v, _, _) = straightened_model(2);
        let c = SurfaceCenter::parse(&v, "p - a", "q").unwrap();
        assert!(matches!(codim2_blowup_charts(&v, &c, "t", "s", ("T", "S")), Err(Error::Validation(_))));
    }

    #[test]
    fn codim2_strict_transforms() {
        for k in 1..=3 {
            let (v, c, f) = straightened_model(k);
            let step = codim2_blowup_charts(&v, &c, "t", "s", ("T", "S")).unwrap();
            let h = Hypersurface::new(v.clone(), f).unwrap();
            let (xs, m) = strict_transform(&h, &step, 1).unwrap();
            assert_eq!(m, 1);
            assert_eq!(xs.equation, step.chart(1).chart.parse(&format!("p*(1 + s^2) + 2*i*a + 2*s*b^{k}")).unwrap());
            let (xt, m) = strict_transform(&h, &step, 0).unwrap();
            assert_eq!(m, 1);
            assert_eq!(xt.equation, step.chart(0).chart.parse(&format!("q*(1 + t^2) + 2*i*a*t + 2*b^{k}")).unwrap());
        }
    }

    #[test]
    fn strict_transform_of_defining_hypersurface() {
        let m = z4();
        let step = point_blowup_charts(&m, &u_names(), |i| format!("U.{i}")).unwrap();
        let y2 = Hypersurface::parse(&m, "z1^2 + z2^2 + z3^2 - z4^4").unwrap();
        let (y1, mult) = strict_transform(&y2, &step, 3).unwrap();
        assert_eq!(mult, 2);
        assert_eq!(y1.equation, y1.chart.parse("u1^2 + u2^2 + u3^2 - u4^2").unwrap());
        let step2 = point_blowup_charts(&y1.chart, &var_names(&["v1", "v2", "v3", "v4"]), |i| format!("W.{i}")).unwrap();
        let (y0, mult) = strict_transform(&y1, &step2, 3).unwrap();
        assert_eq!(mult, 2);
        assert_eq!(y0.equation, y0.chart.parse("v1^2 + v2^2 + v3^2 - 1").unwrap());
    }

    #[test]
    fn strict_transform_rejects_wrong_chart() {
        let m = z4();
        let step = point_blowup_charts(&m, &u_names(), |i| format!("U.{i}")).unwrap();
        let other = Chart::new("other", var_names(&["z1", "z2", "z3", "z4"]), ChartLevel::LocalModel).unwrap();
        let h = Hypersurface::parse(&other, "z1").unwrap();
        assert!(matches!(strict_transform(&h, &step, 0), Err(Error::ChartMismatch(_))));
    }
}
