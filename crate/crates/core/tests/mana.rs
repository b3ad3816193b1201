use adsmagic::background::DetectorSetup;
use adsmagic::mana::*;
use adsmagic::series::DEFAULT_TOL;
use adsmagic::verify::{default_gap_grid, linspace};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

#[test]
fn nonnegative_on_grid() {
    for q in linspace(0.0, 1.0, 41) {
        for re in linspace(-0.5, 0.5, 21) {
            for im in linspace(-0.5, 0.5, 21) {
                assert!(mana(q, Complex64::new(re, im)).unwrap() >= 0.0);
            }
        }
    }
}

#[test]
fn series_points_are_harvestable() {
    for d in 2..=6 {
        for ell in [0.3, 1.0, 30.0] {
            for omega in [0.05, 0.8, 4.0] {
                let p = harvest_point(&DetectorSetup::ads(d, ell, 0.1, 1.0, 1.0, omega).unwrap(), DEFAULT_TOL).unwrap();
                let v = verdict(p.q, p.beta).unwrap();
                assert!(v.harvestable || p.delta > 0.0, "d={d} l={ell} omega={omega}");
                let full = mana(p.q, Complex64::new(p.beta, 0.0)).unwrap();
                assert!((full - v.mana_delta).abs() <= 1e-14);
            }
        }
    }
}

#[test]
fn flat_space_point() {
    let p = harvest_point(&DetectorSetup::minkowski(3, 1.0, 1.0, 1.0).unwrap(), DEFAULT_TOL).unwrap();
    assert_eq!(p.method.as_str(), "minkowski_closed");
    assert!(p.delta > 0.0 && p.mana > 0.0);
}

#[test]
fn decays_at_large_gap() {
    let s = DetectorSetup::ads(3, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    let m = |w: f64| harvest_point(&s.with_gap(w), DEFAULT_TOL).unwrap().mana;
    let slope_4 = (m(4.01).ln() - m(3.99).ln()) / 0.02;
    let slope_6 = (m(6.01).ln() - m(5.99).ln()) / 0.02;
    // d ln M / dΩ ≈ -σ²Ω up to slowly varying corrections.
    assert!((slope_4 + 4.0).abs() < 0.5 && (slope_6 + 6.0).abs() < 0.5);
}

#[test]
fn sorted_delta_gives_sorted_mana() {
    let s = DetectorSetup::ads(3, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    let mut points = mana_curve(&s, &default_gap_grid(), DEFAULT_TOL).unwrap().points;
    points.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    assert!(points.windows(2).all(|w| w[0].mana <= w[1].mana));
}

proptest! {
    #![proptest_config(ProptestConfig {
        rng_seed: RngSeed::Fixed(0x3a4a),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn conjugation_symmetry(q in 0.0f64..1.0, re in -0.5f64..0.5, im in -0.5f64..0.5) {
        let a = mana(q, Complex64::new(re, im)).unwrap();
        let b = mana(q, Complex64::new(re, -im)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trace_is_one(q in 0.0f64..=1.0, re in -0.5f64..0.5, im in -0.5f64..0.5) {
        let s = build_state(q, Complex64::new(re, im)).unwrap();
        prop_assert_eq!(s.trace(), 1.0);
        let m = s.matrix();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(m[i][j], m[j][i].conj());
            }
        }
    }

    #[test]
    fn real_beta_closed_form(q in 1e-6f64..0.5, b in -0.5f64..0.0) {
        let m = mana(q, Complex64::new(b, 0.0)).unwrap();
        let d = -(q + 2.0 * b);
        let expect = if d > 0.0 { (1.0 - 2.0 * q / 3.0 - 4.0 * b / 3.0).ln() } else { 0.0 };
        prop_assert!((m - expect).abs() <= 1e-14);
    }
}
