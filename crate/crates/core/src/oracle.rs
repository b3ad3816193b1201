//! Quadrature reference values for `q` and `β` at finite regulator, and
//! Richardson extrapolation of a regulator sequence to `ε → 0`.
//!
//! Both observables are one-dimensional integrals of the Gaussian-windowed
//! Wightman function along the worldline:
//!
//! ```text
//! q(ε) = (λ²σ/2) √(π/2) ∫ e^{-s²/2σ²} e^{-iΩs} W(s; ε) ds
//! β(ε) = -(λ²σ√(2π)/8) e^{-σ²Ω²/2} ∫ e^{-s²/2σ²} W(s; ε) ds
//! ```
//!
//! On the real axis `W` has near-poles of width `~2γε` at `s = 2πγk`, and for
//! `d >= 4` the integrand cancels by many orders of magnitude around them.
//! The only singularities of the integrand sit at `s = 2πγk + 2iγε`, so the
//! contour is moved down to `s = x - iη`. On it `W(x - iη; ε) = W(x; ε + η/2γ)`
//! and the same Gauss-Kronrod rule converges on a smooth integrand. The shift
//! is the saddle point of the lowest mode `Ω₀ = (d-1)/2γ`: `η = σ²(Ω + Ω₀)`
//! for `q` and `η = σ²Ω₀` for `β`. There the integrand is no larger than the
//! integral, so small results are not lost to cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::background::{derive_geometry, wightman, DetectorSetup};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Half-width of the integration window in units of σ.
const WINDOW_SIGMAS: f64 = 10.0;
/// Panel budget of one quadrature.
pub const MAX_PANELS: usize = 10_000;
const MIN_INITIAL_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Real part of the integral times its prefactor.
    pub value: f64,
    /// Imaginary part (zero up to quadrature error for both observables).
    pub imag: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub epsilon: f64,
    /// Downward displacement `η` of the integration contour.
    pub contour_shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationResult {
    pub limit_value: f64,
    pub eps_sequence: Vec<f64>,
    pub per_eps_values: Vec<f64>,
    pub model_order: usize,
    /// Difference between the quadratic and the linear extrapolant.
    pub discrepancy: f64,
}

fn breakpoints(sigma: f64, gamma: f64) -> Vec<f64> {
    let half = WINDOW_SIGMAS * sigma;
    let period = 2.0 * PI * gamma;
    let k_max = (half / period).floor() as i64;
    let mut pts = vec![-half];
    for k in -k_max..=k_max {
        let s = period * k as f64;
        if s > -half && s < half {
            pts.push(s);
        }
    }
    pts.push(half);
    pts
}

fn lowest_mode(setup: &DetectorSetup) -> Result<f64> {
    let geom = derive_geometry(setup)?;
    Ok(f64::from(setup.d - 1) / (2.0 * geom.gamma))
}

/// Integrates `window(x - iη) · W(x - iη; ε)` over `|x| <= 10σ` and bounds
/// the rest. `window_max` must bound `|window(x - iη)| e^{x²/2σ²}`.
fn windowed_wightman(
    setup: &DetectorSetup,
    eps: f64,
    quad_tol: f64,
    eta: f64,
    window: impl Fn(Complex64) -> Complex64,
    window_max: f64,
    what: &'static str,
) -> Result<(Complex64, f64, usize)> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(what, format!("regulator eps = {eps} (need eps > 0)")));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::Contract(format!("quadrature tolerance {quad_tol} must be positive")));
    }
    let geom = derive_geometry(setup)?;
    let breaks = breakpoints(setup.sigma, geom.gamma);
    let eps_eff = eps + eta / (2.0 * geom.gamma);
    let splits = MIN_INITIAL_PANELS.div_ceil(breaks.len() - 1);
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: quad_tol, max_panels: MAX_PANELS, initial_splits: splits };
    // W is evaluated through the public background routine; a failure there
    // would be a domain error already excluded above.
    let r = integrate(
        |x: f64| {
            window(Complex64::new(x, -eta))
                * wightman(setup, x, eps_eff).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
        &breaks,
        opts,
    );
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::NonConvergence { what, detail: "integrand produced a non-finite value".into() });
    }
    // Beyond the window: |W| <= |W(0)| and ∫_{|x|>10σ} e^{-x²/2σ²} = σ√(2π) erfc(10/√2).
    let w_max = wightman(setup, 0.0, eps_eff)?.norm();
    let tail =
        setup.sigma * (2.0 * PI).sqrt() * crate::specfn::erfc(WINDOW_SIGMAS / 2f64.sqrt()) * w_max * window_max;
    let error = r.abs_error + tail;
    if !r.converged {
        return Err(Error::NonConvergence {
            what,
            detail: format!(
                "{} panels, integral {:.6e} with error estimate {:.3e} (target relative {quad_tol:.1e})",
                r.panels, r.value.re, error
            ),
        });
    }
    Ok((r.value, error, r.panels))
}

/// `q(ε)` by adaptive quadrature.
pub fn quad_q(setup: &DetectorSetup, eps: f64, quad_tol: f64) -> Result<QuadratureResult> {
    let omega = setup.gap;
    let sigma = setup.sigma;
    let eta = sigma * sigma * (omega + lowest_mode(setup)?);
    let inv_two_var = 0.5 / (sigma * sigma);
    let (integral, error, panels) = windowed_wightman(
        setup,
        eps,
        quad_tol,
        eta,
        |s| (-s * s * inv_two_var - Complex64::i() * omega * s).exp(),
        (eta * eta * inv_two_var - omega * eta).exp(),
        "quad_q",
    )?;
    let pref = 0.5 * setup.coupling * setup.coupling * sigma * (PI / 2.0).sqrt();
    let result = QuadratureResult {
        value: pref * integral.re,
        imag: pref * integral.im,
        abs_error_estimate: pref * error,
        subdivisions: panels,
        epsilon: eps,
        contour_shift: eta,
    };
    if result.imag.abs() > 10.0 * result.abs_error_estimate + f64::MIN_POSITIVE {
        return Err(Error::NonConvergence {
            what: "quad_q",
            detail: format!(
                "imaginary part {:.3e} exceeds ten times the error estimate {:.3e}",
                result.imag, result.abs_error_estimate
            ),
        });
    }
    Ok(result)
}

/// Renormalised `β(ε)` from the symmetric full-line integral.
pub fn quad_beta(setup: &DetectorSetup, eps: f64, quad_tol: f64) -> Result<QuadratureResult> {
    let sigma = setup.sigma;
    let eta = sigma * sigma * lowest_mode(setup)?;
    let inv_two_var = 0.5 / (sigma * sigma);
    let (integral, error, panels) = windowed_wightman(
        setup,
        eps,
        quad_tol,
        eta,
        |s| (-s * s * inv_two_var).exp(),
        (eta * eta * inv_two_var).exp(),
        "quad_beta",
    )?;
    let pref = -setup.coupling * setup.coupling * (2.0 * PI).sqrt() * sigma / 8.0
        * (-0.5 * sigma * sigma * setup.gap * setup.gap).exp();
    Ok(QuadratureResult {
        value: pref * integral.re,
        imag: pref * integral.im,
        abs_error_estimate: pref.abs() * error,
        subdivisions: panels,
        epsilon: eps,
        contour_shift: eta,
    })
}

/// Extrapolates `(ε, v)` pairs to `ε = 0` with `v = v₀ + c₁ε + c₂ε²` through
/// the last three points; the discrepancy is the distance to the straight
/// line through the last two.
pub fn richardson_extrapolate(pairs: &[(f64, f64)]) -> Result<ExtrapolationResult> {
    if pairs.len() < 3 {
        return Err(Error::Contract(format!("need at least 3 (eps, value) pairs, got {}", pairs.len())));
    }
    for w in pairs.windows(2) {
        if !(w[0].0 > w[1].0) {
            return Err(Error::Contract("eps sequence must be strictly decreasing".into()));
        }
    }
    if let Some(&(e, _)) = pairs.iter().find(|p| !(p.0 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Contract(format!("invalid pair with eps = {e}")));
    }
    let tail = &pairs[pairs.len() - 3..];
    let eps: Vec<f64> = tail.iter().map(|p| p.0).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            if (eps[i] - eps[j]).abs() <= 1e-14 * eps[i].abs().max(eps[j].abs()) {
                return Err(Error::Contract("degenerate fit: coincident eps values".into()));
            }
        }
    }
    // Lagrange interpolation evaluated at ε = 0.
    let mut quadratic = 0.0;
    for i in 0..3 {
        let mut weight = 1.0;
        for j in 0..3 {
            if i != j {
                weight *= eps[j] / (eps[j] - eps[i]);
            }
        }
        quadratic += weight * tail[i].1;
    }
    let (e1, v1) = tail[1];
    let (e2, v2) = tail[2];
    let linear = (e1 * v2 - e2 * v1) / (e1 - e2);
    Ok(ExtrapolationResult {
        limit_value: quadratic,
        eps_sequence: pairs.iter().map(|p| p.0).collect(),
        per_eps_values: pairs.iter().map(|p| p.1).collect(),
        model_order: 2,
        discrepancy: (quadratic - linear).abs(),
    })
}
