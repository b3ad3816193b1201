//! Large-γ closed forms of `q` and `β`, their d = 2, 3, 4 specialisations and
//! the Euler–Maclaurin bridge back to the exact sums at finite γ.
//!
//! Writing `x = n/γ`, the mode sums are Riemann sums of
//! `f(x) = ∏_{k=1}^{d-2}(γx + k) · e^{-σ²(c + x)²/2}` (with `c = Ω + Ω_d` for `q`
//! and `c = Ω_d` for `β`), and the closed forms are `γ ∫_0^∞ f`. Each monomial
//! integrates to a half-line Gaussian moment
//! `M_n(z) = ∫_0^∞ tⁿ e^{-(t+z)²/2} dt`, which is where the Kummer functions
//! come from.

use std::f64::consts::SQRT_2;

use crate::background::{derive_geometry, DetectorSetup};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::specfn::{
    bernoulli_data, erfc, exp_neg_half_sq, gamma, kummer_1f1, prod_poly_coeffs, Polynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormKind {
    QClosed,
    BetaClosed,
    QTable,
    BetaTable,
}

/// Which of the two sums a Euler–Maclaurin bridge is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmTarget {
    Q,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormResult {
    pub value: f64,
    pub d: u32,
    pub kind: ClosedFormKind,
    /// Boundary terms added to the integral, in physical units.
    pub em_correction: Option<f64>,
    /// Bound on `|exact sum - value|`.
    pub em_residual_bound: Option<f64>,
    /// Signed Bernoulli remainder, evaluated by quadrature.
    pub em_remainder: Option<f64>,
    /// `max|B_{2m}| / (2m)! · ∫|f^{(2m)}|`, the textbook a-priori bound.
    pub em_crude_bound: Option<f64>,
}

impl ClosedFormResult {
    fn plain(value: f64, d: u32, kind: ClosedFormKind) -> Self {
        Self { value, d, kind, em_correction: None, em_residual_bound: None, em_remainder: None, em_crude_bound: None }
    }
}

/// Above this argument the Kummer bracket cancels; the moments are then taken
/// from the Mills-ratio continued fraction instead.
const MOMENT_KUMMER_MAX_Z: f64 = 1.0;

/// `e^{z²/2} M_0(z)` and the ratios `M_k / M_{k-1}` for `k = 1..=n`, from
/// `r_k = k / (z + r_{k+1})` run backwards from a deep enough start.
fn mills_moments(n: usize, z: f64) -> Result<(f64, Vec<f64>)> {
    let run = |depth: usize| {
        let mut r = 0.0;
        let mut ratios = vec![0.0; n + 1];
        for k in (1..=depth).rev() {
            r = k as f64 / (z + r);
            if k <= n {
                ratios[k] = r;
            }
        }
        (1.0 / (z + r), ratios)
    };
    let mut depth = 32 + 2 * n;
    let mut prev = run(depth);
    while depth < 1 << 20 {
        depth *= 2;
        let next = run(depth);
        if (next.0 - prev.0).abs() <= f64::EPSILON * next.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { what: "half-line moment", detail: format!("continued fraction at z = {z}") })
}

/// `Γ((n+1)/2) F(-n/2; 1/2; -z²/2) - √2 z Γ(n/2+1) F((1-n)/2; 3/2; -z²/2)`,
/// which equals `2^{(1-n)/2} M_n(z)`.
pub fn moment_bracket(n: usize, z: f64) -> Result<f64> {
    let nf = n as f64;
    if z <= MOMENT_KUMMER_MAX_Z {
        let w = -0.5 * z * z;
        let first = gamma(0.5 * (nf + 1.0))? * kummer_1f1(-0.5 * nf, 0.5, w)?;
        let second = SQRT_2 * z * gamma(0.5 * nf + 1.0)? * kummer_1f1(0.5 * (1.0 - nf), 1.5, w)?;
        return Ok(first - second);
    }
    Ok(2f64.powf(0.5 * (1.0 - nf)) * half_line_moment(n, z)?)
}

/// `M_n(z) = ∫_0^∞ tⁿ e^{-(t+z)²/2} dt`.
pub fn half_line_moment(n: usize, z: f64) -> Result<f64> {
    if z <= MOMENT_KUMMER_MAX_Z {
        return Ok(2f64.powf(0.5 * (n as f64 - 1.0)) * moment_bracket(n, z)?);
    }
    let (m0, ratios) = mills_moments(n, z)?;
    let prod: f64 = ratios[1..].iter().product();
    Ok(exp_neg_half_sq(z) * m0 * prod)
}

/// `Σ_n C_n σ^{-n-1} M_n(σc)`, the integral `∫_0^∞ f` of one closed form.
fn gaussian_polynomial_integral(coeffs: &[f64], sigma: f64, c: f64) -> Result<f64> {
    let z = sigma * c;
    let mut total = 0.0;
    for (n, &cn) in coeffs.iter().enumerate() {
        let zeta = 2f64.powf(0.5 * (n as f64 - 1.0)) * sigma.powi(-(n as i32) - 1) * cn;
        total += zeta * moment_bracket(n, z)?;
    }
    Ok(total)
}

/// `q_c = 2γα Σ_n ζ_n [Kummer bracket at σΩ′]`, `Ω′ = Ω + Ω_d`.
pub fn q_closed(setup: &DetectorSetup) -> Result<ClosedFormResult> {
    let g = derive_geometry(setup)?;
    let coeffs = prod_poly_coeffs(setup.d, g.gamma)?;
    let integral = gaussian_polynomial_integral(&coeffs, setup.sigma, setup.gap + g.omega_d)?;
    Ok(ClosedFormResult::plain(2.0 * g.gamma * g.alpha * integral, setup.d, ClosedFormKind::QClosed))
}

/// `β_c = -γα e^{-σ²Ω²/2} Σ_n ζ_n [Kummer bracket at σΩ_d]`.
pub fn beta_closed(setup: &DetectorSetup) -> Result<ClosedFormResult> {
    let g = derive_geometry(setup)?;
    let coeffs = prod_poly_coeffs(setup.d, g.gamma)?;
    let integral = gaussian_polynomial_integral(&coeffs, setup.sigma, g.omega_d)?;
    let value = -g.gamma * g.alpha * exp_neg_half_sq(setup.sigma * setup.gap) * integral;
    Ok(ClosedFormResult::plain(value, setup.d, ClosedFormKind::BetaClosed))
}

fn table_d(setup: &DetectorSetup, op: &'static str) -> Result<u32> {
    match setup.d {
        2..=4 => Ok(setup.d),
        d => Err(Error::domain(op, format!("d = {d} has no table row (supported: 2, 3, 4)"))),
    }
}

/// Hand-simplified `q_c` rows for d = 2, 3, 4.
pub fn q_table(setup: &DetectorSetup) -> Result<ClosedFormResult> {
    let d = table_d(setup, "q_table")?;
    let g = derive_geometry(setup)?.gamma;
    let (l2, s, om) = (setup.coupling * setup.coupling, setup.sigma, setup.gap);
    let pi = std::f64::consts::PI;
    let sqrt_2pi = (2.0 * pi).sqrt();
    let value = match d {
        2 => 0.125 * (pi / 2.0).sqrt() * l2 * s * erfc(s * (1.0 + 2.0 * g * om) / (2.0 * SQRT_2 * g)),
        3 => {
            l2 / (16.0 * pi)
                * (2.0 * (-(s + g * s * om).powi(2) / (2.0 * g * g)).exp()
                    - sqrt_2pi * s * om * erfc(s * (1.0 + g * om) / (SQRT_2 * g)))
        }
        _ => {
            l2 / (256.0 * pi * g * g * s)
                * (4.0 * g * s * (3.0 - 2.0 * g * om) * (-s * s * (3.0 + 2.0 * g * om).powi(2) / (8.0 * g * g)).exp()
                    + sqrt_2pi
                        * (4.0 * g * g * (1.0 + s * s * om * om) - s * s)
                        * erfc(s * (3.0 + 2.0 * g * om) / (2.0 * SQRT_2 * g)))
        }
    };
    Ok(ClosedFormResult::plain(value, d, ClosedFormKind::QTable))
}

/// Hand-simplified `β_c` rows for d = 2, 3, 4.
pub fn beta_table(setup: &DetectorSetup) -> Result<ClosedFormResult> {
    let d = table_d(setup, "beta_table")?;
    let g = derive_geometry(setup)?.gamma;
    let (l2, s, om) = (setup.coupling * setup.coupling, setup.sigma, setup.gap);
    let pi = std::f64::consts::PI;
    let value = match d {
        2 => -(1.0 / 16.0) * (pi / 2.0).sqrt() * l2 * s * (-s * s * om * om / 2.0).exp() * erfc(s / (2.0 * SQRT_2 * g)),
        3 => -l2 / (16.0 * pi) * (-s * s * (1.0 / (g * g) + om * om) / 2.0).exp(),
        _ => {
            l2 / (512.0 * pi * g * g * s)
                * (-s * s * (9.0 / (4.0 * g * g) + om * om) / 2.0).exp()
                * ((2.0 * pi).sqrt()
                    * (9.0 * s * s / (8.0 * g * g)).exp()
                    * (s * s - 4.0 * g * g)
                    * erfc(3.0 * s / (2.0 * SQRT_2 * g))
                    - 12.0 * g * s)
        }
    };
    Ok(ClosedFormResult::plain(value, d, ClosedFormKind::BetaTable))
}

/// `P(x) e^{-rate (x + center)²/2}`, closed under differentiation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    pub poly: Polynomial,
    pub center: f64,
    pub rate: f64,
}

impl PolyGaussian {
    pub fn eval(&self, x: f64) -> f64 {
        let u = x + self.center;
        self.poly.eval(x) * (-0.5 * self.rate * u * u).exp()
    }

    /// `(P′ - rate (x + center) P) e^{...}`.
    pub fn derivative(&self) -> Self {
        let shift = Polynomial::new(vec![self.rate * self.center, self.rate]);
        Self { poly: self.poly.derivative().sub(&shift.mul(&self.poly)), center: self.center, rate: self.rate }
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    /// `y ↦ f(h y)`.
    pub fn rescaled(&self, h: f64) -> Self {
        Self { poly: self.poly.rescale_argument(h), center: self.center / h, rate: self.rate * h * h }
    }
}

/// The summand as a function of `x = n/γ`: `f(n/γ)` is term `n` of the mode
/// sum without its prefactor (`2α` for `q`, `-α` for `β`).
pub fn em_term_function(setup: &DetectorSetup, target: EmTarget) -> Result<PolyGaussian> {
    let g = derive_geometry(setup)?;
    let poly = Polynomial::new(prod_poly_coeffs(setup.d, g.gamma)?);
    let rate = setup.sigma * setup.sigma;
    Ok(match target {
        EmTarget::Q => PolyGaussian { poly, center: setup.gap + g.omega_d, rate },
        EmTarget::Beta => PolyGaussian {
            poly: poly.scale(exp_neg_half_sq(setup.sigma * setup.gap)),
            center: g.omega_d,
            rate,
        },
    })
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Closed form plus the Euler–Maclaurin boundary terms at `n = 0`.
///
/// With `g(y) = f(y/γ)` the exact sum is
/// `Σ g(n) = ∫g + g(0)/2 - Σ_{k≤m} B_{2k}/(2k)! g^{(2k-1)}(0) + R_m`,
/// `R_m = -1/(2m)! ∫_0^∞ B_{2m}({y}) g^{(2m)}(y) dy`; the terms at infinity
/// vanish. `R_m` is integrated panel by panel between consecutive integers,
/// and the reported bound is `|R_m|` plus its quadrature error and a rounding
/// allowance.
pub fn euler_maclaurin_correct(setup: &DetectorSetup, target: EmTarget, m: u32) -> Result<ClosedFormResult> {
    let bern = bernoulli_data(m)?;
    let geom = derive_geometry(setup)?;
    let (closed, prefactor) = match target {
        EmTarget::Q => (q_closed(setup)?, 2.0 * geom.alpha),
        EmTarget::Beta => (beta_closed(setup)?, -geom.alpha),
    };
    let g = em_term_function(setup, target)?.rescaled(1.0 / geom.gamma);

    let mut boundary = 0.5 * g.eval(0.0);
    let mut abs_terms = boundary.abs();
    for (k, &b2k) in (1..=m).zip(&bern.numbers) {
        let term = b2k / factorial(2 * k) * g.nth_derivative(2 * k as usize - 1).eval(0.0);
        boundary -= term;
        abs_terms += term.abs();
    }

    let kernel_order = 2 * m as usize;
    let gk = g.nth_derivative(kernel_order);
    // g is negligible once rate (y + center)²/2 exceeds ~800.
    let reach = (1600.0 / g.rate).sqrt() - g.center;
    let panels = reach.ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|k| k as f64).collect();
    let sum_scale = (closed.value / prefactor).abs() + abs_terms;
    let opts = QuadOptions {
        abs_tol: 1e-16 * sum_scale,
        rel_tol: 1e-10,
        max_panels: 8 * panels + 2000,
        initial_splits: 1,
    };
    let remainder = integrate(|y: f64| bern.polynomial.eval(y - y.floor()) * gk.eval(y), &breaks, opts);
    let crude = integrate(|y: f64| gk.eval(y).abs(), &breaks, opts);
    let norm = factorial(2 * m);
    let r_m = -remainder.value / norm;

    let correction = prefactor * boundary;
    let rounding = 64.0 * f64::EPSILON * (closed.value.abs() + (prefactor * abs_terms).abs());
    let bound = prefactor.abs() * (r_m.abs() + remainder.abs_error / norm) + rounding;
    Ok(ClosedFormResult {
        value: closed.value + correction,
        d: setup.d,
        kind: closed.kind,
        em_correction: Some(correction),
        em_residual_bound: Some(bound),
        em_remainder: Some(prefactor * r_m),
        em_crude_bound: Some(prefactor.abs() * bern.max_abs * (crude.value + crude.abs_error) / norm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{beta_series_renormalized, q_series, DEFAULT_TOL};
    use std::f64::consts::PI;

    fn setup(d: u32, ell: f64) -> DetectorSetup {
        DetectorSetup::ads(d, ell, 0.1, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn moment_paths_agree_at_switch() {
        for n in 0..8 {
            let z = MOMENT_KUMMER_MAX_Z;
            let kummer = 2f64.powf(0.5 * (n as f64 - 1.0)) * moment_bracket(n, z).unwrap();
            let (m0, ratios) = mills_moments(n, z).unwrap();
            let cf = exp_neg_half_sq(z) * m0 * ratios[1..].iter().product::<f64>();
            assert!((kummer / cf - 1.0).abs() < 1e-13, "n = {n}: {kummer} vs {cf}");
        }
    }

    #[test]
    fn zeroth_moment_is_erfc() {
        for &z in &[0.0, 0.7, 2.5, 9.0] {
            let m0 = half_line_moment(0, z).unwrap();
            let r = (PI / 2.0).sqrt() * erfc(z / SQRT_2);
            assert!((m0 / r - 1.0).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn d2_q_closed_is_its_table_row() {
        let s = setup(2, 1.7);
        let a = q_closed(&s).unwrap().value;
        let b = q_table(&s).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-13);
    }

    #[test]
    fn d3_beta_closed_matches_elementary_row() {
        let s = setup(3, 1.0);
        let g = 1.01f64.sqrt();
        let expected = -1.0 / (16.0 * PI) * (-(1.0 / (g * g) + 1.0) / 2.0).exp();
        assert!((beta_closed(&s).unwrap().value / expected - 1.0).abs() < 1e-13);
        assert_eq!(beta_closed(&s.with_coupling(0.0)).unwrap().value, 0.0);
        assert_eq!(beta_table(&setup(4, 1.0).with_coupling(0.0)).unwrap().value, 0.0);
    }

    #[test]
    fn table_rejects_other_dimensions() {
        assert!(q_table(&setup(5, 1.0)).is_err());
        assert!(beta_table(&setup(2, 1.0).with_gap(1.0)).is_ok());
    }

    #[test]
    fn descriptor_derivative_matches_finite_difference() {
        let f = em_term_function(&setup(5, 1.3), EmTarget::Q).unwrap();
        let df = f.derivative();
        for i in 0..20 {
            let x = 0.15 * i as f64;
            let h = 1e-5;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((df.eval(x) - fd).abs() <= 1e-8 * fd.abs().max(1e-3), "x = {x}");
        }
        let f2 = em_term_function(&setup(2, 1.0), EmTarget::Q).unwrap();
        let omega_prime = 1.0 + 0.5 / 1.01f64.sqrt();
        assert!((f2.eval(0.0) - (-0.5 * omega_prime * omega_prime).exp()).abs() < 1e-16);
        assert!(f2.eval(60.0) == 0.0);
    }

    #[test]
    fn euler_maclaurin_closes_the_gap() {
        for &target in &[EmTarget::Q, EmTarget::Beta] {
            for &d in &[2, 3, 4] {
                for m in 1..=2 {
                    let s = setup(d, 1.0);
                    let exact = match target {
                        EmTarget::Q => q_series(&s, DEFAULT_TOL).unwrap().value,
                        EmTarget::Beta => beta_series_renormalized(&s, DEFAULT_TOL).unwrap().value,
                    };
                    let em = euler_maclaurin_correct(&s, target, m).unwrap();
                    let with_remainder = em.value + em.em_remainder.unwrap();
                    assert!(
                        (with_remainder - exact).abs() < 1e-13 * exact.abs(),
                        "{target:?} d = {d} m = {m}: {with_remainder} vs {exact}"
                    );
                    assert!((em.value - exact).abs() <= em.em_residual_bound.unwrap());
                }
            }
        }
        assert!(euler_maclaurin_correct(&setup(3, 1.0), EmTarget::Q, 3).is_err());
    }
}
