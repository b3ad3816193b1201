use adsmagic::background::DetectorSetup;
use adsmagic::series::*;
use adsmagic::specfn::{parse_goldens, GOLDENS};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn setup_from(args: &[f64]) -> DetectorSetup {
    DetectorSetup::ads(args[0] as u32, args[1], args[2], args[3], args[4], args[5]).unwrap()
}

#[test]
fn series_match_high_precision_sums() {
    let records = parse_goldens(GOLDENS).unwrap();
    let mut seen = 0;
    for r in &records {
        let got = match r.function.as_str() {
            "q_series" => q_series(&setup_from(&r.args), DEFAULT_TOL).unwrap().value,
            "q_series_reg" => q_series_with_regulator(&setup_from(&r.args), r.args[6], DEFAULT_TOL).unwrap().value,
            "beta_series" => beta_series_renormalized(&setup_from(&r.args), DEFAULT_TOL).unwrap().value,
            "minkowski_q" => minkowski_q(r.args[0] as u32, r.args[1], r.args[2], r.args[3]).unwrap(),
            _ => continue,
        };
        seen += 1;
        let err = ((got - r.value) / r.value).abs();
        assert!(err < 1e-13, "{} {:?}: {got} vs {} (rel {err:.2e})", r.function, r.args, r.value);
    }
    assert_eq!(seen, 11);
}

#[test]
fn regulator_limit() {
    let s = DetectorSetup::ads(3, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    let q = q_series(&s, DEFAULT_TOL).unwrap().value;
    let qe = q_series_with_regulator(&s, 1e-6, DEFAULT_TOL).unwrap().value;
    assert!((qe - q).abs() / q <= 1e-5);
    assert!(qe < q);
}

#[test]
fn minkowski_sentinel_is_rejected_by_series() {
    let s = DetectorSetup::minkowski(3, 1.0, 1.0, 1.0).unwrap();
    assert!(q_series(&s, DEFAULT_TOL).is_err());
    assert!(beta_series_renormalized(&s, DEFAULT_TOL).is_err());
}

#[test]
fn minkowski_d3_known_value() {
    let b = minkowski_beta(3, 1.0, 1.0, 1.0).unwrap();
    let expect = -(-0.5f64).exp() / (16.0 * std::f64::consts::PI);
    assert!((b / expect - 1.0).abs() < 1e-14);
}

#[test]
fn tolerance_is_validated() {
    let s = DetectorSetup::ads(3, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    assert!(q_series(&s, 0.0).is_err());
    assert!(q_series_with_regulator(&s, -1.0, DEFAULT_TOL).is_err());
    assert!(delta_discriminant(0.1, 0.2).is_err());
}

fn any_setup() -> impl Strategy<Value = DetectorSetup> {
    (2u32..=10, -1.0f64..2.0, 0.0f64..=1.0, 0.01f64..10.0)
        .prop_map(|(d, log_ell, r, omega)| DetectorSetup::ads(d, 10f64.powf(log_ell), r, 1.0, 1.0, omega).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        rng_seed: RngSeed::Fixed(0x5e41e5),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn signs(s in any_setup()) {
        let q = q_series(&s, DEFAULT_TOL).unwrap();
        let b = beta_series_renormalized(&s, DEFAULT_TOL).unwrap();
        let d = delta_series(&s, DEFAULT_TOL).unwrap();
        prop_assert_eq!(q.sign(), 1.0);
        prop_assert_eq!(b.sign(), -1.0);
        prop_assert_eq!(d.sign(), 1.0);
        prop_assert!(q.log_abs_value.is_finite() && b.log_abs_value.is_finite() && d.log_abs_value.is_finite());
    }

    #[test]
    fn delta_is_minus_q_minus_two_beta(s in any_setup()) {
        let q = q_series(&s, DEFAULT_TOL).unwrap().value;
        let b = beta_series_renormalized(&s, DEFAULT_TOL).unwrap().value;
        let d = delta_series(&s, DEFAULT_TOL).unwrap().value;
        // Δ can be many orders below q and β, so compare on their scale.
        let scale = q.abs() + 2.0 * b.abs();
        prop_assert!((d + q + 2.0 * b).abs() <= 1e-12 * scale);
    }

    #[test]
    fn coupling_enters_squared(s in any_setup(), lambda in 0.1f64..3.0) {
        let a = s.with_coupling(lambda);
        let b = s.with_coupling(2.0 * lambda);
        for f in [q_series, beta_series_renormalized, delta_series] {
            let (x, y) = (f(&a, DEFAULT_TOL).unwrap(), f(&b, DEFAULT_TOL).unwrap());
            // Stored as logs, so the rounding floor grows with |ln x|.
            let slack = 4.0 * f64::EPSILON * x.log_abs_value.abs().max(1.0) + 1e-14;
            let shift = y.log_abs_value - x.log_abs_value - 4f64.ln();
            prop_assert!(shift.abs() <= slack, "log ratio off by {:e}", shift);
        }
    }
}
