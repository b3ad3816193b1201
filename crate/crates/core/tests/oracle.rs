use adsmagic::background::DetectorSetup;
use adsmagic::oracle::*;
use adsmagic::series::{beta_series_renormalized, q_series, DEFAULT_TOL};

fn standard(d: u32) -> DetectorSetup {
    DetectorSetup::ads(d, 1.0, 0.1, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn extrapolated_quadrature_reaches_the_series() {
    let s = standard(3);
    let eps = [4e-3, 2e-3, 1e-3];
    let qp: Vec<_> = eps.iter().map(|&e| (e, quad_q(&s, e, 1e-12).unwrap().value)).collect();
    let bp: Vec<_> = eps.iter().map(|&e| (e, quad_beta(&s, e, 1e-12).unwrap().value)).collect();
    let q = q_series(&s, DEFAULT_TOL).unwrap().value;
    let b = beta_series_renormalized(&s, DEFAULT_TOL).unwrap().value;
    let xq = richardson_extrapolate(&qp).unwrap();
    let xb = richardson_extrapolate(&bp).unwrap();
    assert!((xq.limit_value / q - 1.0).abs() <= 1e-6, "{} vs {q}", xq.limit_value);
    assert!((xb.limit_value / b - 1.0).abs() <= 1e-6);
    assert_eq!(xq.model_order, 2);
    assert!(xq.discrepancy > 0.0);
}

#[test]
fn imaginary_part_is_within_error() {
    for d in 2..=5 {
        let r = quad_q(&standard(d), 1e-3, 1e-12).unwrap();
        assert!(r.imag.abs() <= 10.0 * r.abs_error_estimate);
        assert!(r.abs_error_estimate >= 0.0 && r.subdivisions <= MAX_PANELS);
    }
}

#[test]
fn beta_is_negative() {
    for d in 2..=6 {
        for omega in [0.1, 1.0, 3.0] {
            let s = DetectorSetup::ads(d, 0.7, 0.2, 1.0, 1.0, omega).unwrap();
            assert!(quad_beta(&s, 1e-2, 1e-10).unwrap().value < 0.0);
        }
    }
}

#[test]
fn monotone_in_regulator() {
    let s = standard(4);
    let v: Vec<f64> = [1e-1, 5e-2, 2.5e-2].iter().map(|&e| quad_q(&s, e, 1e-12).unwrap().value).collect();
    assert!(v[0] < v[1] && v[1] < v[2]);
}

#[test]
fn rejects_bad_input() {
    let s = standard(3);
    assert!(quad_q(&s, 0.0, 1e-10).is_err());
    assert!(quad_beta(&s, -1.0, 1e-10).is_err());
    assert!(quad_q(&DetectorSetup::minkowski(3, 1.0, 1.0, 1.0).unwrap(), 0.1, 1e-10).is_err());
    assert!(richardson_extrapolate(&[(0.1, 1.0), (0.1, 1.0), (0.05, 1.0)]).is_err());
}
