use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use cr_moduli::algebra::var::{self, Z, Z_BAR};
use cr_moduli::algebra::{parse_scalar, Gaussian, RatFn, Scalar};
use cr_moduli::exterior::Coframe;
use cr_moduli::liealg::{g_rb, lie_pipeline, maurer_cartan};
use cr_moduli::model::{builtin_m14, CRModel};
use cr_moduli::moduli::{
    decide_from_reports, invariant, transform_model, InvariantReport, Pipeline, Transformation, Verdict,
};
use cr_moduli::vecfield::{model_space, VectorField};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=6).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn gaussian() -> impl Strategy<Value = Gaussian> {
    (rational(), rational()).prop_map(|(re, im)| Gaussian::new(re, im))
}

fn nonzero_gaussian() -> impl Strategy<Value = Gaussian> {
    gaussian().prop_filter("nonzero", |g| !g.is_zero())
}

fn nonzero_real() -> impl Strategy<Value = Gaussian> {
    rational().prop_filter("nonzero", |r| *r != BigRational::from_integer(0.into())).prop_map(Gaussian::real)
}

/// Polynomial in `z`, `conj(z)`, `a`, `conj(a)` with up to four terms.
fn polynomial() -> impl Strategy<Value = RatFn> {
    prop::collection::vec((gaussian(), 0u32..3, 0u32..3, 0u32..2, 0u32..2), 1..5).prop_map(|terms| {
        let mut out = RatFn::zero();
        for (c, p, q, r, s) in terms {
            let m = [(Z, p), (Z_BAR, q), (var::A, r), (var::A_BAR, s)]
                .iter()
                .fold(RatFn::one(), |acc, &(v, e)| &acc * &RatFn::var(v).pow(e as i32).unwrap());
            out = &out + &(&RatFn::constant(c) * &m);
        }
        out
    })
}

fn rational_function() -> impl Strategy<Value = RatFn> {
    (polynomial(), polynomial()).prop_filter_map("nonzero denominator", |(n, d)| n.checked_div(&d).ok())
}

fn vector_field() -> impl Strategy<Value = VectorField> {
    let coords = [Z, Z_BAR, var::U1, var::U2, var::U3, var::U4];
    prop::collection::vec((0..coords.len(), polynomial()), 1..4)
        .prop_map(move |parts| VectorField::from_pairs(parts.into_iter().map(|(k, c)| (coords[k], c))))
}

fn model(a: &Gaussian, b: &Gaussian) -> CRModel {
    builtin_m14(&RatFn::constant(a.clone()), &RatFn::constant(b.clone()))
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn conjugation_is_an_involution(f in rational_function()) {
        prop_assert_eq!(f.conj().conj(), f.clone());
        prop_assert_eq!((&f * &f.conj()).conj(), &f * &f.conj());
    }

    #[test]
    fn conjugation_respects_arithmetic(f in rational_function(), g in rational_function()) {
        prop_assert_eq!((&f * &g).conj(), &f.conj() * &g.conj());
        prop_assert_eq!((&f + &g).conj(), &f.conj() + &g.conj());
    }

    #[test]
    fn bracket_commutes_with_conjugation(x in vector_field(), y in vector_field()) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.bracket(&y).conj(), x.conj().bracket(&y.conj()));
        prop_assert_eq!(x.bracket(&y), y.bracket(&x).scale(&RatFn::int(-1)));
    }

    #[test]
    fn display_parse_round_trip(f in rational_function()) {
        prop_assert_eq!(parse_scalar(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn jacobi_for_random_fields(x in vector_field(), y in vector_field(), z in vector_field()) {
        let j = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn exterior_derivative_squares_to_zero(f in polynomial(), a in nonzero_gaussian(), b in nonzero_real()) {
        let cf = Coframe::coordinate(&model_space(&model(&a, &b)));
        // A function of all coordinates: a -> u1, conj(a) -> u4.
        let g = f.substitute(&|v| match v {
            v if v == var::A => Some(RatFn::var(var::U1)),
            v if v == var::A_BAR => Some(RatFn::var(var::U4)),
            _ => None,
        }).unwrap();
        let dg = cf.d_function(&g);
        prop_assert!(cf.d(&dg).is_zero());
        let w = dg.wedge(&cf.dx()[0]);
        prop_assert!(cf.d(&cf.d(&w)).is_zero());
    }

    #[test]
    fn lie_maurer_cartan_is_closed(r in nonzero_real(), b in nonzero_real()) {
        let (r, b) = (RatFn::constant(r), RatFn::constant(b));
        let alg = g_rb(&r, &b).unwrap();
        prop_assert!(alg.jacobi_violations().is_empty());
        let mc = maurer_cartan(&alg);
        for l in mc.lhs_symbols() {
            prop_assert!(mc.closure_defect(l).unwrap().is_zero());
        }
        let run = lie_pipeline(&r, &b).unwrap();
        for l in run.split.lhs_symbols() {
            prop_assert!(run.split.closure_defect(l).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn pipelines_agree_with_the_closed_form(a in nonzero_gaussian(), b in nonzero_real()) {
        let want = &(&a * &a.conj()) * &(&b * &b).inv().unwrap();
        let m = model(&a, &b);
        let c = invariant(&m, Pipeline::Cartan).unwrap();
        let l = invariant(&m, Pipeline::Lie).unwrap();
        prop_assert_eq!(c.invariant.clone(), Some(RatFn::constant(want)));
        prop_assert_eq!(c.key(), l.key());
    }

    #[test]
    fn rotations_and_scalings_preserve_the_report(
        a in nonzero_gaussian(),
        b in nonzero_real(),
        m in 1i64..6,
        n in -5i64..6,
        lambda in (1i64..6, 1i64..6),
    ) {
        let base = model(&a, &b);
        let lambda = BigRational::new(lambda.0.into(), lambda.1.into());
        let t = Transformation::Compose(vec![Transformation::pythagorean(m, n), Transformation::Scaling(lambda.clone()), Transformation::W4Rescale(lambda)]);
        let moved = transform_model(&base, &t).unwrap();
        let r1 = invariant(&base, Pipeline::Cartan).unwrap();
        let r2 = invariant(&moved, Pipeline::Cartan).unwrap();
        prop_assert_eq!(r1.key(), r2.key());
        prop_assert_eq!(decide_from_reports(r1, r2).verdict, Verdict::Equivalent);
    }

    #[test]
    fn report_json_round_trip(a in gaussian(), b in nonzero_real()) {
        let rep = invariant(&model(&a, &b), Pipeline::Lie).unwrap();
        let v = rep.to_json();
        let back = InvariantReport::from_json(&serde_json::from_str(&v.to_string()).unwrap()).unwrap();
        prop_assert_eq!(back, rep);
    }
}

#[test]
fn b_sign_is_invisible_to_the_invariant() {
    let a: Scalar = parse_scalar("2+i").unwrap();
    let plus = invariant(&builtin_m14(&a, &RatFn::int(3)), Pipeline::Cartan).unwrap();
    let minus = invariant(&builtin_m14(&a, &RatFn::int(-3)), Pipeline::Cartan).unwrap();
    assert_eq!(plus.key(), minus.key());
}
