//! Upper incomplete gamma function for real order.

use super::gamma::gamma;
use crate::error::{Error, Result};

const MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this argument (and below `s + 1`) the continued fraction is replaced by series.
const CF_MIN_Z: f64 = 1.5;

fn nonconv(detail: String) -> Error {
    Error::NonConvergence { what: "upper_inc_gamma", detail }
}

/// Lentz evaluation of the Legendre continued fraction; returns Γ(s, z).
fn continued_fraction(s: f64, z: f64) -> Result<f64> {
    let mut b = z + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = if b.abs() < TINY { 1.0 / TINY } else { 1.0 / b };
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((s * z.ln() - z).exp() * h);
        }
    }
    Err(nonconv(format!("continued fraction at s = {s}, z = {z}")))
}

/// Lower incomplete gamma γ(s, z) for `s > 0` from its positive series.
fn lower_series(s: f64, z: f64) -> Result<f64> {
    let mut term = 1.0 / s;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= z / (s + n as f64);
        sum += term;
        if term < f64::EPSILON * sum {
            return Ok((s * z.ln() - z).exp() * sum);
        }
    }
    Err(nonconv(format!("lower series at s = {s}, z = {z}")))
}

/// Exponential integral E1(z) = Γ(0, z) for small positive z.
fn e1_series(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        term *= -z / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < f64::EPSILON * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Γ(s, z) = ∫_z^∞ t^{s-1} e^{-t} dt for real `s` (any sign) and `z > 0`.
pub fn upper_inc_gamma(s: f64, z: f64) -> Result<f64> {
    if !s.is_finite() || z.is_nan() || z <= 0.0 {
        return Err(Error::domain(
            "upper_inc_gamma",
            format!("s = {s}, z = {z} (need finite s and z > 0)"),
        ));
    }
    if z == f64::INFINITY {
        return Ok(0.0);
    }
    if z >= CF_MIN_Z.max(s + 1.0) {
        return continued_fraction(s, z);
    }
    if s > 0.0 {
        return Ok(gamma(s)? - lower_series(s, z)?);
    }
    // Non-positive order at small z: descend with Γ(t, z) = (Γ(t+1, z) - z^t e^{-z}) / t.
    let steps = (-s).floor();
    let (mut t, mut value) = if s == s.floor() {
        (0.0, e1_series(z))
    } else {
        let start = s + steps + 1.0;
        (start, gamma(start)? - lower_series(start, z)?)
    };
    let ez = (-z).exp();
    while t > s + 0.5 {
        t -= 1.0;
        value = (value - z.powf(t) * ez) / t;
    }
    Ok(value)
}
