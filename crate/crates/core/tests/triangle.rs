use num_bigint::BigInt;

use segre_verlinde::arith::{int, rat};
use segre_verlinde::quot_vi::{
    Backend, CalibratedConvention, RootTarget, SumOptions, VIConvention,
};
use segre_verlinde::triangle::{
    build_alpha, derive_params, DNormalizationPolicy, Engine, ModuliInput, Verdict, VerifyOptions,
};

fn engine() -> Engine {
    let conv = VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap();
    Engine::new(
        CalibratedConvention::verify(conv).unwrap(),
        SumOptions::default(),
    )
}

fn input(g: u32, r: u32, d: i64, l: u32) -> ModuliInput {
    ModuliInput::new(g, r, d, l).unwrap()
}

// Values cross-checked against a direct floating-point evaluation of the
// unsimplified root-of-unity formula.
#[test]
fn rank_two_odd_degree_regression() {
    let e = engine();
    let expected = [24, 171, 704, 2125, 5256, 11319, 22016, 39609];
    for (l, v) in (1..=8).zip(expected) {
        assert_eq!(
            e.verlinde_number(&input(2, 2, 1, l)).unwrap(),
            BigInt::from(v),
            "l={l}"
        );
    }
    let p = e.fit_level_polynomial(2, 2, 1, 1..=8).unwrap();
    assert_eq!(
        p.coefficients,
        vec![
            int(1),
            rat(13, 3),
            rat(23, 3),
            int(7),
            rat(10, 3),
            rat(2, 3)
        ]
    );
    assert_eq!(p.volume_term, rat(2, 3));
}

#[test]
fn small_rank_values() {
    let e = engine();
    for ((g, r, d, l), v) in [
        ((2, 2, 0, 1), 9),
        ((2, 2, 0, 2), 40),
        ((2, 3, 0, 1), 16),
        ((2, 3, 1, 1), 340),
        ((3, 2, 0, 1), 27),
        ((3, 2, 1, 1), 224),
        ((2, 2, 0, 3), 125),
        ((2, 3, 0, 2), 125),
    ] {
        assert_eq!(
            e.verlinde_number(&input(g, r, d, l)).unwrap(),
            BigInt::from(v),
            "{:?}",
            (g, r, d, l)
        );
    }
}

#[test]
fn degree_only_matters_mod_rank() {
    let e = engine();
    for d in -4..=4 {
        let a = e.verlinde_number(&input(2, 3, d, 1)).unwrap();
        let b = e.verlinde_number(&input(2, 3, d + 3, 1)).unwrap();
        assert_eq!(a, b, "d={d}");
    }
}

#[test]
fn float_backend_agrees_on_small_inputs() {
    let conv = VIConvention::new(RootTarget::SignedByRank, 1, 0).unwrap();
    let float = Engine::new(
        CalibratedConvention::verify(conv).unwrap(),
        SumOptions {
            backend: Backend::Float,
            ..SumOptions::default()
        },
    );
    let exact = engine();
    for (g, r, d, l) in [(2, 2, 1, 2), (2, 3, 2, 1), (3, 2, 0, 2), (2, 1, 0, 5)] {
        let i = input(g, r, d, l);
        assert_eq!(
            float.verlinde_number(&i).unwrap(),
            exact.verlinde_number(&i).unwrap()
        );
    }
}

#[test]
fn reports_carry_named_checks() {
    let rep = engine().verify_triangle(&input(2, 3, 0, 2), &VerifyOptions::default());
    assert!(rep.passes(), "{rep:?}");
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "integrality",
            "corners_equal",
            "d_shift",
            "exponent_consistency",
            "level_rank",
            "rank_alpha_m"
        ]
    );
    assert!(rep.checks.iter().all(|c| c.verdict == Verdict::Pass));
    assert!(!rep.segre_independent);

    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["verlinde"], "125");
    assert_eq!(json["params"]["N"], rep.params.unwrap().big_n);
}

#[test]
fn zero_cap_still_checks_the_witness() {
    let e = engine().with_policy(DNormalizationPolicy::Auto { cap: 0 });
    assert_eq!(
        e.verlinde_number(&input(2, 2, 1, 1)).unwrap(),
        BigInt::from(24)
    );
}

#[test]
fn alpha_rank_matches_closed_form() {
    for (g, r, d, l) in [(2, 2, 1, 3), (4, 3, 2, 2), (3, 4, 0, 1), (5, 3, -7, 4)] {
        let i = input(g, r, d, l);
        let p = derive_params(&i, &DNormalizationPolicy::default()).unwrap();
        let a = build_alpha(&i, &p);
        assert_eq!(a.rank_alpha_m, -((r * r) as i64) * (g as i64 - 1));
        assert_eq!(a.alpha.degree, -p.big_n);
    }
}
