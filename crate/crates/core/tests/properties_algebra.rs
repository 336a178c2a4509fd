use proptest::prelude::*;
use threefold::algebra::{resultant_in, var_names, GaussianRational, MultiPoly, UniPolyView};
use threefold::birational::{compose_maps, Chart, ChartLevel, SubstitutionMap};

fn gr() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5).prop_map(|(a, b, c, d)| &GaussianRational::ratio(a, b) + &(&GaussianRational::ratio(c, d) * &GaussianRational::i()))
}

fn nonzero_gr() -> impl Strategy<Value = GaussianRational> {
    gr().prop_filter("nonzero", |c| !num_traits::Zero::is_zero(c))
}

fn vars4() -> Vec<String> {
    var_names(&["x1", "x2", "x3", "x4"])
}

fn poly(max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, 4), gr()), 0..=max_terms).prop_map(|ts| MultiPoly::from_terms(&vars4(), ts))
}

/// `x_i ↦ c_i·x_i + p_i(x_{i+1}, …)`: invertible and triangular.
fn triangular_map(source: Chart, target: Chart) -> impl Strategy<Value = SubstitutionMap> {
    let parts = prop::collection::vec((nonzero_gr(), prop::collection::vec((prop::collection::vec(0..=2u32, 4), gr()), 0..=2)), 4);
    parts.prop_map(move |parts| {
        let sv = &source.variables;
        let assignment = parts
            .into_iter()
            .enumerate()
            .map(|(i, (c, tail))| {
                let lead = MultiPoly::var(sv, &sv[i]).unwrap().scale(&c);
                let tail = tail.into_iter().map(|(mut e, c)| {
                    for x in e.iter_mut().take(i + 1) {
                        *x = 0;
                    }
                    (e, c)
                });
                &lead + &MultiPoly::from_terms(sv, tail)
            })
            .collect();
        SubstitutionMap::new(source.clone(), target.clone(), assignment, "m").unwrap()
    })
}

fn chart(id: &str) -> Chart {
    let names: Vec<String> = (1..=4).map(|i| format!("{id}{i}")).collect();
    Chart::new(id, names, ChartLevel::LocalModel).unwrap()
}

fn univariate(max_deg: usize) -> impl Strategy<Value = MultiPoly> {
    (1..=max_deg, prop::collection::vec(gr(), max_deg), nonzero_gr()).prop_map(|(d, cs, lead)| {
        let vars = var_names(&["x", "y"]);
        let mut terms: Vec<(Vec<u32>, GaussianRational)> = cs.into_iter().take(d).enumerate().map(|(e, c)| (vec![e as u32, 0], c)).collect();
        terms.push((vec![d as u32, 0], lead));
        MultiPoly::from_terms(&vars, terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(f in poly(8, 3), g in poly(8, 3), h in poly(8, 3)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn substitute_respects_composition(
        f in poly(8, 2),
        m1 in triangular_map(chart("b"), Chart::new("t", vars4(), ChartLevel::LocalModel).unwrap()),
        m2 in triangular_map(chart("a"), chart("b")),
    ) {
        let twice = m2.pullback(&m1.pullback(&f).unwrap()).unwrap();
        let once = compose_maps(&m1, &m2).unwrap().pullback(&f).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn leibniz(f in poly(6, 3), g in poly(6, 3), v in 0usize..4) {
        let x = &vars4()[v];
        let lhs = (&f * &g).differentiate(x).unwrap();
        let rhs = &(&f.differentiate(x).unwrap() * &g) + &(&f * &g.differentiate(x).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn extract_variable_power_round_trip(f in poly(8, 3), v in 0usize..4) {
        prop_assume!(!f.is_zero());
        let x = &vars4()[v];
        let (e, q) = f.extract_variable_power(x).unwrap();
        prop_assert_eq!(&MultiPoly::var(&vars4(), x).unwrap().pow(e) * &q, f);
        prop_assert!(q.terms().any(|(m, _)| m.0[v] == 0));
    }

    #[test]
    fn resultant_antisymmetry(f in univariate(4), g in univariate(4)) {
        let df = UniPolyView::new(&f, "x").unwrap().degree().unwrap();
        let dg = UniPolyView::new(&g, "x").unwrap().degree().unwrap();
        let rfg = resultant_in(&f, &g, "x").unwrap();
        let rgf = resultant_in(&g, &f, "x").unwrap();
        let sign = if (df * dg) % 2 == 1 { -&rfg } else { rfg };
        prop_assert_eq!(sign, rgf);
    }

    #[test]
    fn resultant_vanishes_on_common_root(f in univariate(3), g in univariate(3), a in gr()) {
        let vars = var_names(&["x", "y"]);
        let lin = &MultiPoly::var(&vars, "x").unwrap() - &MultiPoly::constant(&vars, a);
        prop_assert!(resultant_in(&(&f * &lin), &(&g * &lin), "x").unwrap().is_zero());
    }
}
