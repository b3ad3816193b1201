//! Confluent hypergeometric functions M(a; b; z) and U(a, b, z).

use super::gamma::{gamma, gamma_signed, rgamma};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

const MAX_TERMS: usize = 20_000;

/// For `z` up to this value U is assembled from two M series; beyond it the
/// Laplace-type integral is used, because the connection formula cancels.
const TRICOMI_SERIES_MAX_Z: f64 = 1.0;

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kahan–Babuška summation of the defining series, stopping once the terms are
/// decreasing and negligible.
fn m_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) / (b + nf) * z / (nf + 1.0);
        term *= ratio;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if term == 0.0 || (ratio.abs() < 1.0 && term.abs() <= f64::EPSILON * 0.25 * (sum + comp).abs()) {
            return Ok(sum + comp);
        }
    }
    Err(Error::NonConvergence {
        what: "kummer_1f1",
        detail: format!("series for a = {a}, b = {b}, z = {z} exceeded {MAX_TERMS} terms"),
    })
}

/// Kummer's confluent hypergeometric function M(a; b; z) = ₁F₁(a; b; z).
///
/// Terminating polynomials are summed directly. Otherwise the series is taken
/// in whichever of the two Kummer-equivalent forms has non-alternating terms
/// where one exists. Accuracy is to a few ulps wherever the result is not
/// itself the product of cancellation (e.g. large negative `z` with `a > b`).
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::domain("kummer_1f1", format!("non-finite input a = {a}, b = {b}, z = {z}")));
    }
    if is_non_positive_integer(b) {
        return Err(Error::domain("kummer_1f1", format!("b = {b} is a non-positive integer")));
    }
    if z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if is_non_positive_integer(a) {
        return m_series(a, b, z);
    }
    let c = b - a;
    if is_non_positive_integer(c) {
        // M(a; b; z) = e^z M(b-a; b; -z), a finite polynomial.
        return Ok(z.exp() * m_series(c, b, -z)?);
    }
    if z < 0.0 && c >= 0.0 {
        return Ok(z.exp() * m_series(c, b, -z)?);
    }
    m_series(a, b, z)
}

/// Laplace-type representation `U = z^{-a}/Γ(a) ∫_0^∞ e^{-u} u^{a-1} (1 + u/z)^{b-a-1} du`, `a > 0`.
fn tricomi_integral(a: f64, b: f64, z: f64) -> Result<f64> {
    let upper = (2.0 * a + 50.0).max(60.0);
    let mut breaks = vec![0.0];
    let peak = (a - 1.0).max(0.0);
    if peak > 0.0 && peak < upper {
        breaks.push(peak);
    }
    breaks.push(upper);
    let integrand = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        (-u + (a - 1.0) * u.ln() + (b - a - 1.0) * (u / z).ln_1p()).exp()
    };
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-14, max_panels: 2000, initial_splits: 8 };
    let r = integrate(integrand, &breaks, opts);
    if !r.converged && r.abs_error > 1e-12 * r.value.abs() {
        return Err(Error::NonConvergence {
            what: "tricomi_u",
            detail: format!("integral for a = {a}, b = {b}, z = {z}: error {:.3e}", r.abs_error),
        });
    }
    Ok((-a * z.ln()).exp() * r.value / gamma(a)?)
}

/// Tricomi's confluent hypergeometric function U(a, b, z) for `z > 0` and non-integer `b`.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || z.is_nan() || z <= 0.0 {
        return Err(Error::domain("tricomi_u", format!("a = {a}, b = {b}, z = {z} (need z > 0)")));
    }
    if b == b.floor() {
        return Err(Error::domain("tricomi_u", format!("integer b = {b} is not supported")));
    }
    if is_non_positive_integer(a) {
        // U(-m, b, z) = (-1)^m (b)_m M(-m; b; z)
        let m = (-a) as u32;
        let poch: f64 = (0..m).map(|k| b + k as f64).product();
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(sign * poch * kummer_1f1(a, b, z)?);
    }
    if z > TRICOMI_SERIES_MAX_Z && a > 0.0 {
        return tricomi_integral(a, b, z);
    }
    let first = gamma_signed(1.0 - b)? * rgamma(a - b + 1.0)? * kummer_1f1(a, b, z)?;
    let second = gamma_signed(b - 1.0)?
        * rgamma(a)?
        * z.powf(1.0 - b)
        * kummer_1f1(a - b + 1.0, 2.0 - b, z)?;
    Ok(first + second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::erfc;
    use std::f64::consts::PI;

    #[test]
    fn kummer_elementary_cases() {
        assert_eq!(kummer_1f1(1.3, 2.0, 0.0).unwrap(), 1.0);
        assert!((kummer_1f1(1.0, 1.0, 2.5).unwrap() - 2.5f64.exp()).abs() < 1e-14 * 2.5f64.exp());
        assert!((kummer_1f1(-2.0, 0.5, 3.0).unwrap() - (1.0 - 12.0 + 12.0)).abs() < 1e-14);
        assert!(kummer_1f1(1.0, -3.0, 1.0).is_err());
    }

    #[test]
    fn kummer_transform_polynomial() {
        // M(3/2; 1/2; z) = e^z (1 + 2z)
        let z = -7.5;
        let v = kummer_1f1(1.5, 0.5, z).unwrap();
        assert!((v / (z.exp() * (1.0 + 2.0 * z)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tricomi_half_order_is_exponential_integral_like() {
        // U(1/2, 1/2, z) = √π e^z erfc(√z)
        for &z in &[0.3, 0.9, 1.5, 4.0, 30.0] {
            let v = tricomi_u(0.5, 0.5, z).unwrap();
            let r = PI.sqrt() * z.exp() * erfc(z.sqrt());
            assert!((v / r - 1.0).abs() < 1e-13, "z = {z}: {v} vs {r}");
        }
    }

    #[test]
    fn tricomi_branches_agree_at_switch() {
        for &a in &[1.0, 1.5, 2.5, 4.0] {
            let z = TRICOMI_SERIES_MAX_Z;
            let series = {
                let first = gamma_signed(-0.5).unwrap() * rgamma(a - 0.5).unwrap() * kummer_1f1(a, 1.5, z).unwrap();
                let second = gamma_signed(0.5).unwrap() * rgamma(a).unwrap() * z.powf(-0.5) * kummer_1f1(a - 0.5, 0.5, z).unwrap();
                first + second
            };
            let integral = tricomi_integral(a, 1.5, z).unwrap();
            assert!((series / integral - 1.0).abs() < 1e-13, "a = {a}");
        }
    }

    #[test]
    fn tricomi_domain() {
        assert!(tricomi_u(1.0, 2.0, 1.0).is_err());
        assert!(tricomi_u(1.0, 1.5, 0.0).is_err());
    }
}
