//! Complementary and imaginary error functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const MAX_ITER: usize = 5000;
const TINY: f64 = 1e-300;

/// Below this `erfc` is `1 - erf` from the power series; above it the
/// continued fraction is used.
const ERFC_SERIES_MAX: f64 = 0.75;

/// Above this `erfi_scaled` switches from the power series to the asymptotic expansion.
const ERFI_ASYMPTOTIC_MIN: f64 = 7.0;

/// `exp(-x^2)` with the rounding error of `x^2` folded back in.
pub(crate) fn exp_neg_sq(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (-hi).exp() * (1.0 - lo)
}

/// `exp(-x^2 / 2)`, same treatment.
pub(crate) fn exp_neg_half_sq(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (-0.5 * hi).exp() * (1.0 - 0.5 * lo)
}

/// erf(x) for small |x| from `2x/√π e^{-x²} Σ (2x²)^n / (2n+1)!!`, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..MAX_ITER {
        term *= x2 / (2 * n + 1) as f64;
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * exp_neg_sq(x) * sum
}

/// Modified Lentz evaluation of `x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))`.
fn erfc_continued_fraction(x: f64) -> Result<f64> {
    let mut f = x.max(TINY);
    let mut c = f;
    let mut d = 0.0;
    for k in 1..=MAX_ITER {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(f);
        }
    }
    Err(Error::NonConvergence {
        what: "erfc continued fraction",
        detail: format!("x = {x} after {MAX_ITER} iterations"),
    })
}

/// Complementary error function, accurate in relative terms into the far tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERFC_SERIES_MAX {
        return 1.0 - erf_series(x);
    }
    if x > 27.3 {
        return 0.0;
    }
    // The fraction converges for every x above the switch, so this cannot fail.
    let f = erfc_continued_fraction(x).expect("erfc continued fraction converges for x >= 0.75");
    exp_neg_sq(x) / (PI.sqrt() * f)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.abs() < ERFC_SERIES_MAX {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

/// `e^{-x²} erfi(x)` for `x >= 0` (the Dawson integral times `2/√π`).
///
/// Bounded by about 1.08 and decaying like `1/(√π x)`.
pub fn erfi_scaled(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("erfi_scaled", format!("x = {x} (need x >= 0)")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x < ERFI_ASYMPTOTIC_MIN {
        // erfi(x) = 2/√π Σ x^{2n+1} / (n! (2n+1))
        let x2 = x * x;
        let mut power = x;
        let mut sum = x;
        for n in 1..MAX_ITER {
            power *= x2 / n as f64;
            let term = power / (2 * n + 1) as f64;
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        return Ok(FRAC_2_SQRT_PI * sum * exp_neg_sq(x));
    }
    // 1/(√π x) Σ (2n-1)!! / (2x²)^n, truncated at the smallest term.
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for n in 1..MAX_ITER {
        let next = term * (2 * n - 1) as f64 * inv;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    Ok(sum / (PI.sqrt() * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert!((erfc(1.0) / 0.157_299_207_050_285_13 - 1.0).abs() < 1e-14);
        let far = erfc(10.0);
        assert!((far / 2.088_487_583_762_544_8e-45 - 1.0).abs() < 1e-13);
        assert!((erfc(-1.0) - 1.842_700_792_949_714_9).abs() < 1e-15);
    }

    #[test]
    fn erfc_is_smooth_at_the_branch_switch() {
        let a = erfc(ERFC_SERIES_MAX * (1.0 - 1e-15));
        let b = erfc(ERFC_SERIES_MAX);
        assert!((a / b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn erfi_scaled_limits() {
        assert_eq!(erfi_scaled(0.0).unwrap(), 0.0);
        let x = 50.0;
        let v = erfi_scaled(x).unwrap();
        assert!((v * PI.sqrt() * x - 1.0).abs() < 1e-3);
        assert!(erfi_scaled(-1.0).is_err());
    }

    #[test]
    fn erfi_scaled_is_continuous_at_switch() {
        let a = erfi_scaled(ERFI_ASYMPTOTIC_MIN * (1.0 - 1e-14)).unwrap();
        let b = erfi_scaled(ERFI_ASYMPTOTIC_MIN).unwrap();
        assert!((a / b - 1.0).abs() < 1e-13);
    }
}
