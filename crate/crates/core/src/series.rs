//! Exact mode sums for the excitation probability `q`, the renormalised
//! coherence `β` and the discriminant `Δ = -(q + 2β)`, plus the flat-space
//! closed forms they tend to as `γ → ∞`.
//!
//! Every sum has the shape `P · Σ_n t_n` with positive, log-concave terms
//! `t_n = w_n · exp(-(quadratic in Ω_n))`. Terms are generated and accumulated
//! in log space, so neither the polynomial weight nor the Gaussian factor can
//! overflow or underflow, and because the successive ratios `t_{n+1}/t_n` are
//! non-increasing the geometric tail `t_n r / (1 - r)` is a rigorous bound on
//! what is left once `r < 1`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::background::{derive_geometry, mode_frequency, DetectorSetup, Geometry};
use crate::error::{Error, Result};
use crate::specfn::{erfc, gamma_ratio_log, log_gamma, tricomi_u, upper_inc_gamma};

/// Default relative truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-14;
/// Hard cap on the number of terms of any series.
pub const TERM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesMethod {
    Series,
    SeriesWithRegulator,
    MinkowskiClosed,
}

impl SeriesMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesMethod::Series => "series",
            SeriesMethod::SeriesWithRegulator => "series_with_regulator",
            SeriesMethod::MinkowskiClosed => "minkowski_closed",
        }
    }
}

/// A summed series together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    /// `ln |value|`, finite even when `value` underflows to zero; `-inf` for an exact zero.
    pub log_abs_value: f64,
    pub method: SeriesMethod,
    /// Regulator used; 0 when the limit has been taken.
    pub epsilon: f64,
    pub terms_used: u64,
    /// Absolute bound on the neglected tail.
    pub tail_bound: f64,
    /// The term cap was reached before the tolerance was met.
    pub capped: bool,
}

impl SeriesResult {
    /// Sign of the exact value: `+1`, `-1` or `0` (zero coupling only).
    pub fn sign(&self) -> f64 {
        if self.log_abs_value == f64::NEG_INFINITY {
            0.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Log of the partial sum and of the tail bound, relative to the same prefactor.
struct LogSum {
    log_sum: f64,
    log_tail: f64,
    terms: u64,
    capped: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::Contract(format!("series tolerance {tol} must lie in (0, 1)")))
    }
}

/// Streams `exp(log_term(n))` for n = 0, 1, ... until the tail bound built from
/// `log_ratio(n) = ln(t_{n+1}/t_n)` falls below `tol` times the partial sum.
fn sum_log_concave(
    min_terms: u64,
    tol: f64,
    log_term: impl Fn(u64) -> Result<f64>,
    log_ratio: impl Fn(u64) -> f64,
) -> Result<LogSum> {
    let ln_tol = tol.ln();
    let mut reference = f64::NEG_INFINITY;
    let mut scaled = 0.0;
    let mut log_tail = f64::INFINITY;
    for n in 0..TERM_CAP {
        let l = log_term(n)?;
        if l > reference {
            scaled = scaled * (reference - l).exp() + 1.0;
            reference = l;
        } else {
            scaled += (l - reference).exp();
        }
        if n + 1 < min_terms {
            continue;
        }
        let lr = log_ratio(n);
        if lr < 0.0 {
            log_tail = l + lr - (-lr.exp_m1()).ln();
            let log_sum = reference + scaled.ln();
            if log_tail - log_sum <= ln_tol {
                return Ok(LogSum { log_sum, log_tail, terms: n + 1, capped: false });
            }
        } else {
            log_tail = f64::INFINITY;
        }
    }
    Ok(LogSum { log_sum: reference + scaled.ln(), log_tail, terms: TERM_CAP, capped: true })
}

fn finish(ln_prefactor: f64, sign: f64, s: LogSum, method: SeriesMethod, epsilon: f64) -> SeriesResult {
    let log_abs_value = ln_prefactor + s.log_sum;
    SeriesResult {
        value: sign * log_abs_value.exp(),
        log_abs_value,
        method,
        epsilon,
        terms_used: s.terms,
        tail_bound: (ln_prefactor + s.log_tail).exp(),
        capped: s.capped,
    }
}

/// `ln((n + d - 1)/(n + 1))`, the weight part of the term ratio.
fn weight_log_ratio(d: u32, n: u64) -> f64 {
    ((d as f64 - 2.0) / (n as f64 + 1.0)).ln_1p()
}

struct Ctx {
    d: u32,
    geom: Geometry,
    sigma2: f64,
    omega: f64,
}

impl Ctx {
    fn new(setup: &DetectorSetup) -> Result<Self> {
        Ok(Self {
            d: setup.d,
            geom: derive_geometry(setup)?,
            sigma2: setup.sigma * setup.sigma,
            omega: setup.gap,
        })
    }
    fn omega_n(&self, n: u64) -> f64 {
        mode_frequency(&self.geom, self.d, n)
    }
    fn min_terms(&self) -> u64 {
        self.d as u64 + 2
    }
}

fn regulated_q(setup: &DetectorSetup, eps: f64, tol: f64, method: SeriesMethod) -> Result<SeriesResult> {
    check_tol(tol)?;
    let c = Ctx::new(setup)?;
    let h = 1.0 / c.geom.gamma;
    let s = sum_log_concave(
        c.min_terms(),
        tol,
        |n| {
            let shifted = c.omega + c.omega_n(n);
            let k = 2.0 * n as f64 + c.d as f64 - 1.0;
            Ok(gamma_ratio_log(c.d, n)? - 0.5 * c.sigma2 * shifted * shifted - k * eps)
        },
        |n| {
            let sum_next = 2.0 * c.omega + c.omega_n(n) + c.omega_n(n + 1);
            weight_log_ratio(c.d, n) - 0.5 * c.sigma2 * h * sum_next - 2.0 * eps
        },
    )?;
    Ok(finish(2f64.ln() + c.geom.ln_alpha, 1.0, s, method, eps))
}

fn regulated_beta(setup: &DetectorSetup, eps: f64, tol: f64, method: SeriesMethod) -> Result<SeriesResult> {
    check_tol(tol)?;
    let c = Ctx::new(setup)?;
    let h = 1.0 / c.geom.gamma;
    let s = sum_log_concave(
        c.min_terms(),
        tol,
        |n| {
            let on = c.omega_n(n);
            let k = 2.0 * n as f64 + c.d as f64 - 1.0;
            Ok(gamma_ratio_log(c.d, n)? - 0.5 * c.sigma2 * (c.omega * c.omega + on * on) - k * eps)
        },
        |n| {
            weight_log_ratio(c.d, n) - 0.5 * c.sigma2 * h * (c.omega_n(n) + c.omega_n(n + 1)) - 2.0 * eps
        },
    )?;
    Ok(finish(c.geom.ln_alpha, -1.0, s, method, eps))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "regulator eps = {eps} must be positive; use the unregulated series for the limit"
        )))
    }
}

/// `q = 2α Σ_n Γ(d+n-1)/Γ(n+1) e^{-σ²(Ω+Ω_n)²/2}`.
pub fn q_series(setup: &DetectorSetup, tol: f64) -> Result<SeriesResult> {
    regulated_q(setup, 0.0, tol, SeriesMethod::Series)
}

/// `q` at finite regulator: each term carries an extra `e^{-(2n+d-1)ε}`.
pub fn q_series_with_regulator(setup: &DetectorSetup, eps: f64, tol: f64) -> Result<SeriesResult> {
    check_eps(eps)?;
    regulated_q(setup, eps, tol, SeriesMethod::SeriesWithRegulator)
}

/// Renormalised `β = -α Σ_n Γ(d+n-1)/Γ(n+1) e^{-σ²(Ω²+Ω_n²)/2}`.
pub fn beta_series_renormalized(setup: &DetectorSetup, tol: f64) -> Result<SeriesResult> {
    regulated_beta(setup, 0.0, tol, SeriesMethod::Series)
}

/// Renormalised `β` at finite regulator, the series counterpart of the
/// symmetric full-line integral.
pub fn beta_series_with_regulator(setup: &DetectorSetup, eps: f64, tol: f64) -> Result<SeriesResult> {
    check_eps(eps)?;
    regulated_beta(setup, eps, tol, SeriesMethod::SeriesWithRegulator)
}

/// `Δ = -(q + 2β)` for scalar inputs with `q > 0` and real `β <= 0`.
pub fn delta_discriminant(q: f64, beta: f64) -> Result<f64> {
    if !(q > 0.0) || !(beta <= 0.0) {
        return Err(Error::Contract(format!(
            "discriminant needs q > 0 and real beta <= 0 (got q = {q}, beta = {beta})"
        )));
    }
    Ok(-(q + 2.0 * beta))
}

/// `Δ = 2α Σ_n Γ(d+n-1)/Γ(n+1) e^{-σ²(Ω²+Ω_n²)/2} (1 - e^{-σ²ΩΩ_n})`, summed
/// directly so that it stays positive and accurate when `q` and `-2β` nearly cancel.
pub fn delta_series(setup: &DetectorSetup, tol: f64) -> Result<SeriesResult> {
    check_tol(tol)?;
    let c = Ctx::new(setup)?;
    let h = 1.0 / c.geom.gamma;
    let gap_factor = |n: u64| (-(-c.sigma2 * c.omega * c.omega_n(n)).exp_m1()).ln();
    let s = sum_log_concave(
        c.min_terms(),
        tol,
        |n| {
            let on = c.omega_n(n);
            Ok(gamma_ratio_log(c.d, n)? - 0.5 * c.sigma2 * (c.omega * c.omega + on * on) + gap_factor(n))
        },
        |n| {
            weight_log_ratio(c.d, n) - 0.5 * c.sigma2 * h * (c.omega_n(n) + c.omega_n(n + 1))
                + gap_factor(n + 1)
                - gap_factor(n)
        },
    )?;
    Ok(finish(2f64.ln() + c.geom.ln_alpha, 1.0, s, SeriesMethod::Series, 0.0))
}

fn check_flat_args(op: &'static str, d: u32, sigma: f64, coupling: f64, omega: f64) -> Result<()> {
    if d < 2 || !(sigma > 0.0) || !coupling.is_finite() || !(omega >= 0.0) || !omega.is_finite() || !sigma.is_finite() {
        return Err(Error::domain(
            op,
            format!("d = {d}, sigma = {sigma}, lambda = {coupling}, omega = {omega} (need d >= 2, sigma > 0, omega >= 0)"),
        ));
    }
    Ok(())
}

/// Flat-space excitation probability
/// `λ²ΩΓ(d-1)πσ^{4-d} / (2(8π)^{d/2}Γ(d/2)) · e^{-σ²Ω²/2} U(d/2, 3/2, σ²Ω²/2)`.
///
/// At `Ω = 0` the product `Ω U` is replaced by its limit `√(2π)/(σ Γ(d/2))`.
pub fn minkowski_q(d: u32, sigma: f64, coupling: f64, omega: f64) -> Result<f64> {
    check_flat_args("minkowski_q", d, sigma, coupling, omega)?;
    let df = d as f64;
    let ln_pref = log_gamma(df - 1.0)? + PI.ln() + (4.0 - df) * sigma.ln()
        - 2f64.ln()
        - 0.5 * df * (8.0 * PI).ln()
        - log_gamma(0.5 * df)?;
    let pref = coupling * coupling * ln_pref.exp();
    if omega == 0.0 {
        return Ok(pref * (2.0 * PI).sqrt() / (sigma * log_gamma(0.5 * df)?.exp()));
    }
    let z = 0.5 * sigma * sigma * omega * omega;
    Ok(pref * omega * (-z).exp() * tricomi_u(0.5 * df, 1.5, z)?)
}

/// Four-dimensional flat-space `q` in its elementary form
/// `(λ²/16π)(2e^{-σ²Ω²/2} - √(2π)σΩ erfc(σΩ/√2))`.
pub fn minkowski_q_erfc_form(sigma: f64, coupling: f64, omega: f64) -> f64 {
    let x = sigma * omega;
    coupling * coupling / (16.0 * PI)
        * (2.0 * (-0.5 * x * x).exp() - (2.0 * PI).sqrt() * x * erfc(x / SQRT_2))
}

/// Four-dimensional flat-space `q` as `λ²σΩ/(16√2 π) Γ(-1/2, σ²Ω²/2)`.
pub fn minkowski_q_incgamma_form(sigma: f64, coupling: f64, omega: f64) -> Result<f64> {
    let z = 0.5 * sigma * sigma * omega * omega;
    Ok(coupling * coupling * sigma * omega / (16.0 * SQRT_2 * PI) * upper_inc_gamma(-0.5, z)?)
}

/// Flat-space coherence
/// `-λ² 2^{-(d+7)/2} π^{1-d/2} σ^{3-d} Γ((d-1)/2)/Γ(d/2) e^{-σ²Ω²/2}`.
pub fn minkowski_beta(d: u32, sigma: f64, coupling: f64, omega: f64) -> Result<f64> {
    check_flat_args("minkowski_beta", d, sigma, coupling, omega)?;
    let df = d as f64;
    let ln_mag = -0.5 * (df + 7.0) * 2f64.ln() + (1.0 - 0.5 * df) * PI.ln() + (3.0 - df) * sigma.ln()
        + log_gamma(0.5 * (df - 1.0))?
        - log_gamma(0.5 * df)?
        - 0.5 * sigma * sigma * omega * omega;
    Ok(-coupling * coupling * ln_mag.exp())
}

/// Divergence diagnostics. Not part of the physics surface.
pub mod diagnostics {
    use super::*;
    use crate::specfn::erfi_scaled;

    /// Term `n` of the unrenormalised coherence,
    /// `-α w_n e^{-σ²(Ω²+Ω_n²)/2} [1 - i erfi(σΩ_n/√2)]`.
    ///
    /// The imaginary part is formed as `α w_n e^{-σ²Ω²/2} · (e^{-x²} erfi(x))`
    /// so that the exponentially large `erfi` never appears on its own.
    pub fn beta_raw_term(setup: &DetectorSetup, n: u64) -> Result<Complex64> {
        let c = Ctx::new(setup)?;
        let on = c.omega_n(n);
        let ln_w = gamma_ratio_log(c.d, n)? + c.geom.ln_alpha;
        let re = -(ln_w - 0.5 * c.sigma2 * (c.omega * c.omega + on * on)).exp();
        let x = setup.sigma * on / SQRT_2;
        let im = (ln_w - 0.5 * c.sigma2 * c.omega * c.omega).exp() * erfi_scaled(x)?;
        Ok(Complex64::new(re, im))
    }

    /// Partial sum of the unrenormalised coherence through `n = N`.
    pub fn beta_series_raw(setup: &DetectorSetup, n_max: u64) -> Result<Complex64> {
        (0..=n_max).try_fold(Complex64::new(0.0, 0.0), |acc, n| Ok(acc + beta_raw_term(setup, n)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(d: u32, ell: f64, omega: f64) -> DetectorSetup {
        DetectorSetup::ads(d, ell, 0.1, 1.0, 1.0, omega).unwrap()
    }

    #[test]
    fn zero_coupling_gives_exact_zero() {
        let s = setup(3, 1.0, 1.0).with_coupling(0.0);
        assert_eq!(q_series(&s, DEFAULT_TOL).unwrap().value, 0.0);
        assert_eq!(beta_series_renormalized(&s, DEFAULT_TOL).unwrap().value, 0.0);
        assert_eq!(minkowski_beta(3, 1.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn huge_gap_underflows_but_keeps_its_log() {
        let r = q_series(&setup(3, 1.0, 100.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.log_abs_value.is_finite() && r.log_abs_value < -4900.0);
    }

    #[test]
    fn regulator_suppresses() {
        let s = setup(3, 1.0, 1.0);
        let q = q_series(&s, DEFAULT_TOL).unwrap().value;
        let big = q_series_with_regulator(&s, 50.0, DEFAULT_TOL).unwrap();
        assert!(big.value < q);
        assert!(q_series_with_regulator(&s, 0.0, DEFAULT_TOL).is_err());
        let tiny = q_series_with_regulator(&s, 1e-6, DEFAULT_TOL).unwrap().value;
        assert!(((tiny - q) / q).abs() <= 1e-5);
        assert!(tiny < q);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(delta_discriminant(0.1, -0.05).unwrap(), 0.0);
        assert!((delta_discriminant(0.1, -0.08).unwrap() - 0.06).abs() < 1e-16);
        assert!((delta_discriminant(0.1, -0.02).unwrap() + 0.06).abs() < 1e-16);
        assert!(delta_discriminant(0.0, -0.1).is_err());
        assert!(delta_discriminant(0.1, 0.01).is_err());
    }

    #[test]
    fn minkowski_d3_forms_agree() {
        for &omega in &[0.05, 0.5, 1.0, 2.7, 6.0] {
            let u = minkowski_q(3, 1.0, 1.0, omega).unwrap();
            let e = minkowski_q_erfc_form(1.0, 1.0, omega);
            let g = minkowski_q_incgamma_form(1.0, 1.0, omega).unwrap();
            assert!((u / e - 1.0).abs() < 1e-10, "omega = {omega}");
            assert!((g / e - 1.0).abs() < 1e-10, "omega = {omega}");
        }
        assert!(minkowski_q(3, 1.0, 1.0, 20.0).unwrap() <= 1e-80);
    }

    #[test]
    fn minkowski_beta_examples() {
        let b = minkowski_beta(3, 1.0, 1.0, 0.8).unwrap();
        let expected = -(-0.32f64).exp() / (16.0 * PI);
        assert!((b / expected - 1.0).abs() < 1e-14);
        // d = 2 at Ω = 0: π^{1-d/2} = 1, so the value is -Γ(1/2)/2^{9/2}.
        let b2 = minkowski_beta(2, 1.0, 1.0, 0.0).unwrap();
        assert!((b2 / (-PI.sqrt() / 2f64.powf(4.5)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn raw_beta_real_part_is_renormalised_series() {
        let s = setup(3, 1.0, 1.0);
        let first = diagnostics::beta_raw_term(&s, 0).unwrap();
        let g = derive_geometry(&s).unwrap();
        let expected = -g.alpha * (-0.5 * (1.0 + g.omega_d * g.omega_d)).exp();
        assert!((first.re / expected - 1.0).abs() < 1e-14);
        let raw = diagnostics::beta_series_raw(&s, 200).unwrap();
        let ren = beta_series_renormalized(&s, DEFAULT_TOL).unwrap().value;
        assert!((raw.re / ren - 1.0).abs() < 1e-14);
    }

    #[test]
    fn raw_beta_imaginary_terms_do_not_decay() {
        // d = 3: the terms settle onto a non-zero constant, so the sum diverges linearly.
        let s = setup(3, 1.0, 1.0);
        let g = derive_geometry(&s).unwrap();
        let limit = g.alpha * (-0.5f64).exp() * 2f64.sqrt() * g.gamma / PI.sqrt();
        let t = diagnostics::beta_raw_term(&s, 10_000).unwrap().im;
        assert!((t / limit - 1.0).abs() < 1e-3);
        // d >= 4: the terms grow.
        let s4 = setup(4, 1.0, 1.0);
        let a = diagnostics::beta_raw_term(&s4, 100).unwrap().im;
        let b = diagnostics::beta_raw_term(&s4, 200).unwrap().im;
        assert!(b > a);
    }
}
