//! The commutative square of the blow-up lemma on the local model
//! `M = 4-space`, `S = {z3 = z4 = 0}`, `P = 0`.

use super::blowup::{codim2_blowup_charts, coordinate_blowup_chart, point_blowup_charts, straighten_center, SurfaceCenter};
use super::chart::{compose_maps, first_mismatch, Chart, ChartLevel};
use crate::algebra::var_names;
use crate::certificate::{Certificate, Status};
use crate::error::{Error, Result};

/// Chart indices of `g` (0-based) on which the strict transform `S′` of `S`
/// is `{w3 = w4 = 0}`; on charts 3 and 4 it is empty.
const DISTINGUISHED: [usize; 2] = [0, 1];

/// Verifies `f ∘ h = g ∘ f′` on the local model.
pub fn verify_lemma_square() -> Certificate {
    verify_lemma_square_with_center("z3", "z4").expect("local model is well formed")
}

/// Like [`verify_lemma_square`], but `f` blows up the given center while
/// `g`, `f′` and `h` are built for the model plane `{z3 = z4 = 0}`. Any
/// center other than the plane breaks commutativity.
pub fn verify_lemma_square_with_center(p: &str, q: &str) -> Result<Certificate> {
    let m = Chart::new("M", var_names(&["z1", "z2", "z3", "z4"]), ChartLevel::LocalModel)?;
    let center = SurfaceCenter::parse(&m, p, q)?;
    let plane = SurfaceCenter::parse(&m, "z3", "z4")?;

    let mut cert = Certificate::new("square-check", Status::Pass).param("center", format!("{{{}, {}}}", center.generators[0], center.generators[1]));
    cert.justify("M, M', X, X' are irreducible and the charts are dense, so agreement on the distinguished charts determines the maps");

    let straight = straighten_center(&center, &m, "V", &var_names(&["p_1", "q_1", "a_1", "b_1"]))?;
    let sv = &straight.chart.variables;
    let f_center = SurfaceCenter::new(straight.chart.coordinate(&sv[0])?, straight.chart.coordinate(&sv[1])?)?;
    let f = codim2_blowup_charts(&straight.chart, &f_center, "t_1", "s_1", ("F.T", "F.S"))?;

    let g = point_blowup_charts(&m, &var_names(&["w1", "w2", "w3", "w4"]), |i| format!("G.{i}"))?;
    for (i, gc) in g.charts.iter().enumerate() {
        let (mult, _) = gc.map.pullback(&m.coordinate("z3")?)?.extract_variable_power(&gc.exceptional)?;
        cert.value(format!("g[{}].mult(z3)", i + 1), mult);
        if mult != 1 {
            cert.status = Status::Fail;
        }
    }

    let mut pairs = 0;
    for &c in &DISTINGUISHED {
        let gc = &g.charts[c];
        let mp = &gc.chart;
        let s_prime = SurfaceCenter::new(
            gc.map.pullback(&plane.generators[0])?.extract_variable_power(&gc.exceptional)?.1,
            gc.map.pullback(&plane.generators[1])?.extract_variable_power(&gc.exceptional)?.1,
        )?;
        let straight_p = straighten_center(&s_prime, mp, &format!("V'{}", c + 1), &var_names(&["p_0", "q_0", "a_0", "b_0"]))?;
        let svp = &straight_p.chart.variables;
        let fp_center = SurfaceCenter::new(straight_p.chart.coordinate(&svp[0])?, straight_p.chart.coordinate(&svp[1])?)?;
        let ids = (format!("F'{}.T", c + 1), format!("F'{}.S", c + 1));
        let fp = codim2_blowup_charts(&straight_p.chart, &fp_center, "t_0", "s_0", (&ids.0, &ids.1))?;

        // The rest coordinate of f's charts that corresponds to g's exceptional variable.
        let g_exc_ambient = &m.variables[c];
        let straight_model = straighten_center(&plane, &m, "V", &var_names(&["p_1", "q_1", "a_1", "b_1"]))?;
        let exc_name = straight_model
            .chart
            .variables
            .iter()
            .find(|v| straight_model.chart.coordinate(v).ok().as_ref() == straight_model.forward.image_of(g_exc_ambient).ok())
            .cloned()
            .ok_or_else(|| Error::InternalInconsistent("no rest coordinate for g's exceptional variable".into()))?;

        for idx in 0..2 {
            let fc = &f.charts[idx];
            let base = fc.chart.clone();
            // fiber coordinate: t at index 0 (chart T), s at index 1 (chart S)
            let curve: Vec<String> = base.variables.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, v)| v.clone()).collect();
            let h = coordinate_blowup_chart(&base, &curve, &exc_name, fp.charts[idx].chart.clone(), &format!("h[{}]", fc.chart.id))?;
            let f_map = compose_maps(&straight.forward, &fc.map)?;
            let fp_map = compose_maps(&straight_p.forward, &fp.charts[idx].map)?;
            let left = compose_maps(&f_map, &h.map)?;
            let right = compose_maps(&gc.map, &fp_map)?;
            let key = format!("{} -> {}", h.chart.id, m.id);
            cert.value(format!("{key}: f∘h"), &left);
            cert.value(format!("{key}: g∘f'"), &right);
            pairs += 1;
            if let Some((v, a, b)) = first_mismatch(&left, &right)? {
                cert.status = Status::Fail;
                cert.value("first_mismatch", format!("{v}: {a} != {b}"));
                cert.justify(format!("square fails on chart pair ({}, G.{}) at {v}", fc.chart.id, c + 1));
                return Ok(cert);
            }
        }
    }
    cert.value("pairs_checked", pairs);
    Ok(cert)
}
