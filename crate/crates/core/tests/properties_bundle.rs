use num_traits::Zero;
use proptest::prelude::*;
use threefold::algebra::GaussianRational;
use threefold::bundle::{section_dim, splitting_type, LaurentPoly, SplittingType, TransitionMatrix, PROFILE_WINDOW};

fn gr() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, 1i64..=3, -5i64..=5, 1i64..=3).prop_map(|(a, b, c, d)| &GaussianRational::ratio(a, b) + &(&GaussianRational::ratio(c, d) * &GaussianRational::i()))
}

fn nonzero_gr() -> impl Strategy<Value = GaussianRational> {
    gr().prop_filter("nonzero", |c| !c.is_zero())
}

/// Polynomial in z of degree at most `deg`.
fn zpoly(deg: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(gr(), deg + 1).prop_map(|cs| LaurentPoly::from_terms(cs.into_iter().enumerate().map(|(e, c)| (e as i64, c))))
}

/// `diag(a, b)·[[1, p], [0, 1]]·[[1, 0], [r, 1]]` with constant `a, b`,
/// optionally with rows swapped: polynomial in z with constant determinant.
fn unimodular() -> impl Strategy<Value = TransitionMatrix> {
    (nonzero_gr(), nonzero_gr(), zpoly(2), zpoly(1), any::<bool>()).prop_map(|(a, b, p, r, swap)| {
        let o = LaurentPoly::one;
        let z = LaurentPoly::zero;
        let d = TransitionMatrix::diagonal(LaurentPoly::monomial(0, a), LaurentPoly::monomial(0, b));
        let up = TransitionMatrix::new([[o(), p], [z(), o()]]);
        let lo = TransitionMatrix::new([[o(), z()], [r, o()]]);
        let m = d.mul(&up).mul(&lo);
        if swap {
            let [r0, r1] = m.entries;
            TransitionMatrix::new([r1, r0])
        } else {
            m
        }
    })
}

fn in_inverse_variable(m: &TransitionMatrix) -> TransitionMatrix {
    let [[a, b], [c, d]] = &m.entries;
    TransitionMatrix::new([[a.invert_variable(), b.invert_variable()], [c.invert_variable(), d.invert_variable()]])
}

/// `H_V(1/z)·diag(z^{−d1}, z^{−d2})·H_U(z)` with its type.
fn cocycle() -> impl Strategy<Value = (TransitionMatrix, SplittingType)> {
    (-3i64..=3, -3i64..=3, unimodular(), unimodular()).prop_map(|(d1, d2, hv, hu)| {
        let diag = TransitionMatrix::diagonal(LaurentPoly::z_pow(-d1), LaurentPoly::z_pow(-d2));
        (in_inverse_variable(&hv).mul(&diag).mul(&hu), SplittingType::new(d1, d2))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn recovers_type_and_degree((t, ty) in cocycle()) {
        let got = splitting_type(&t).unwrap();
        prop_assert_eq!(got, ty);
        prop_assert!(got.d1 >= got.d2);
        let (_, v) = t.det_valuation().unwrap();
        prop_assert_eq!(got.d1 + got.d2, -v);
    }

    #[test]
    fn invariant_under_scaling((t, ty) in cocycle(), c in nonzero_gr()) {
        prop_assert_eq!(splitting_type(&t.scale(&c)).unwrap(), ty);
    }

    #[test]
    fn invariant_under_unimodular_factors((t, ty) in cocycle(), hv in unimodular(), hu in unimodular()) {
        let moved = in_inverse_variable(&hv).mul(&t).mul(&hu);
        prop_assert_eq!(splitting_type(&moved).unwrap(), ty);
    }

    #[test]
    fn section_dim_monotone_and_profile((t, ty) in cocycle()) {
        let m0 = -ty.d1;
        let mut prev = 0;
        for m in m0 - 2..m0 - 1 + PROFILE_WINDOW as i64 {
            let d = section_dim(&t, m).unwrap();
            prop_assert!(d >= prev);
            prop_assert_eq!(d, ty.h0(m));
            prev = d;
        }
    }
}
