use adsmagic::background::DetectorSetup;
use adsmagic::closedform::*;
use adsmagic::series::{beta_series_renormalized, minkowski_q, q_series, DEFAULT_TOL};

fn setup(d: u32, ell: f64) -> DetectorSetup {
    DetectorSetup::ads(d, ell, 0.1, 1.0, 1.0, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn large_radius_agreement() {
    let s = setup(3, 100.0);
    // The gap at this radius is about 1.2e-4; see the notes in the README.
    assert!(rel(q_closed(&s).unwrap().value, q_series(&s, DEFAULT_TOL).unwrap().value) < 2e-4);
    let s4 = setup(4, 100.0);
    assert!(rel(beta_closed(&s4).unwrap().value, beta_series_renormalized(&s4, DEFAULT_TOL).unwrap().value) < 1e-4);
}

#[test]
fn flat_space_recovered() {
    for d in 2..=4 {
        let q = q_closed(&setup(d, 1e4)).unwrap().value;
        assert!(rel(q, minkowski_q(d, 1.0, 1.0, 1.0).unwrap()) < 1e-3, "d = {d}");
    }
}

#[test]
fn d3_beta_row() {
    let s = setup(3, 2.0);
    let g = 4.01f64.sqrt();
    let expect = -(-(1.0 / (g * g) + 1.0) / 2.0).exp() / (16.0 * std::f64::consts::PI);
    assert!(rel(beta_table(&s).unwrap().value, expect) < 1e-14);
    assert!(rel(beta_closed(&s).unwrap().value, expect) < 1e-12);
}

#[test]
fn zero_coupling() {
    let s = setup(4, 1.0).with_coupling(0.0);
    assert_eq!(beta_table(&s).unwrap().value, 0.0);
    assert_eq!(beta_closed(&s).unwrap().value, 0.0);
}

#[test]
fn signs_across_domain() {
    for d in 2..=8 {
        for ell in [0.3, 1.0, 10.0, 300.0] {
            for omega in [0.05, 1.0, 4.0] {
                let s = DetectorSetup::ads(d, ell, 0.1, 1.0, 1.0, omega).unwrap();
                assert!(q_closed(&s).unwrap().value > 0.0);
                assert!(beta_closed(&s).unwrap().value < 0.0);
            }
        }
    }
}

#[test]
fn gap_shrinks_with_radius() {
    let gaps: Vec<f64> = [1.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|&l| {
            let s = setup(3, l);
            rel(q_closed(&s).unwrap().value, q_series(&s, DEFAULT_TOL).unwrap().value)
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn euler_maclaurin_bounds_hold_down_to_unit_radius() {
    for ell in [1.0, 2.0, 5.0, 20.0] {
        for (target, series) in [
            (EmTarget::Q, q_series(&setup(3, ell), DEFAULT_TOL).unwrap().value),
            (EmTarget::Beta, beta_series_renormalized(&setup(3, ell), DEFAULT_TOL).unwrap().value),
        ] {
            let em = euler_maclaurin_correct(&setup(3, ell), target, 2).unwrap();
            let bound = em.em_residual_bound.unwrap();
            assert!((em.value - series).abs() <= bound, "l = {ell} {target:?}");
            assert!(em.em_crude_bound.unwrap() >= bound * 0.5);
        }
    }
}

#[test]
fn euler_maclaurin_at_large_radius() {
    let s = setup(3, 100.0);
    let em = euler_maclaurin_correct(&s, EmTarget::Q, 2).unwrap();
    let q = q_series(&s, DEFAULT_TOL).unwrap().value;
    assert!(rel(em.value, q) <= 1e-8);
    assert!(euler_maclaurin_correct(&s, EmTarget::Q, 3).is_err());
}

#[test]
fn term_function_examples() {
    let s = DetectorSetup::ads(2, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    let f = em_term_function(&s, EmTarget::Q).unwrap();
    let gamma = 1.01f64.sqrt();
    let omega_prime = 1.0 + 1.0 / (2.0 * gamma);
    assert!(rel(f.eval(0.0), (-omega_prime * omega_prime / 2.0).exp()) < 1e-14);
    assert!(f.eval(60.0) < 1e-300);
}
