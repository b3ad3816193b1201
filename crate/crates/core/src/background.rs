//! Static detector in global AdS_{d+1}: derived parameters, the embedding
//! hyperboloid, geodesic intervals along the worldline and the regularised
//! pulled-back Wightman function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfn::{gamma_ratio_log, log_gamma};

/// AdS radius, or the flat-space limit ℓ → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdsRadius {
    Finite(f64),
    Minkowski,
}

impl AdsRadius {
    /// `ℓ` as a float, with `inf` for flat space.
    pub fn as_f64(self) -> f64 {
        match self {
            AdsRadius::Finite(l) => l,
            AdsRadius::Minkowski => f64::INFINITY,
        }
    }
}

/// Physical parameters of one detector configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSetup {
    /// Number of spatial dimensions.
    pub d: u32,
    pub ads_radius: AdsRadius,
    /// Radial position `R` of the static worldline.
    pub radial_position: f64,
    /// Width σ of the Gaussian switching.
    pub sigma: f64,
    /// Coupling λ.
    pub coupling: f64,
    /// Common energy gap Ω.
    pub gap: f64,
}

impl DetectorSetup {
    /// Validated setup at finite AdS radius.
    pub fn ads(d: u32, ell: f64, radial_position: f64, sigma: f64, coupling: f64, gap: f64) -> Result<Self> {
        let s = Self { d, ads_radius: AdsRadius::Finite(ell), radial_position, sigma, coupling, gap };
        s.validate()?;
        Ok(s)
    }

    /// Validated flat-space setup.
    pub fn minkowski(d: u32, sigma: f64, coupling: f64, gap: f64) -> Result<Self> {
        let s = Self { d, ads_radius: AdsRadius::Minkowski, radial_position: 0.0, sigma, coupling, gap };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSetup(m));
        if self.d < 2 {
            return bad(format!("d = {} (need d >= 2)", self.d));
        }
        if let AdsRadius::Finite(l) = self.ads_radius {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("ell = {l} (need 0 < ell < inf; use the Minkowski sentinel for flat space)"));
            }
        }
        if !(self.radial_position >= 0.0 && self.radial_position.is_finite()) {
            return bad(format!("R = {} (need R >= 0)", self.radial_position));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} (need sigma > 0)", self.sigma));
        }
        if !self.coupling.is_finite() {
            return bad(format!("lambda = {} (need a finite coupling)", self.coupling));
        }
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return bad(format!("omega = {} (need omega > 0)", self.gap));
        }
        Ok(())
    }

    pub fn with_gap(&self, gap: f64) -> Self {
        Self { gap, ..*self }
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self { coupling, ..*self }
    }

    pub fn is_minkowski(&self) -> bool {
        matches!(self.ads_radius, AdsRadius::Minkowski)
    }

    pub(crate) fn ell(&self, op: &'static str) -> Result<f64> {
        match self.ads_radius {
            AdsRadius::Finite(l) => Ok(l),
            AdsRadius::Minkowski => Err(Error::MinkowskiSentinel(op)),
        }
    }
}

/// Quantities derived from a finite-radius setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// `γ = √(ℓ² + R²)`.
    pub gamma: f64,
    /// `α = λ²σ²π γ^{1-d} / (4 (4π)^{d/2} Γ(d/2))`.
    pub alpha: f64,
    /// `ln α`, finite even where α underflows; `-inf` at zero coupling.
    pub ln_alpha: f64,
    /// `Ω_d = (d-1)/(2γ)`.
    pub omega_d: f64,
    /// Ricci scalar `-d(d+1)/ℓ²`.
    pub curvature: f64,
}

pub fn derive_geometry(setup: &DetectorSetup) -> Result<Geometry> {
    setup.validate()?;
    let ell = setup.ell("derive_geometry")?;
    let d = setup.d as f64;
    let gamma = ell.hypot(setup.radial_position);
    let ln_alpha = 2.0 * setup.coupling.abs().ln() + 2.0 * setup.sigma.ln() + PI.ln()
        + (1.0 - d) * gamma.ln()
        - 4f64.ln()
        - 0.5 * d * (4.0 * PI).ln()
        - log_gamma(0.5 * d)?;
    Ok(Geometry {
        gamma,
        alpha: ln_alpha.exp(),
        ln_alpha,
        omega_d: (d - 1.0) / (2.0 * gamma),
        curvature: -d * (d + 1.0) / (ell * ell),
    })
}

/// `Ω_n = (2n + d - 1)/(2γ)`.
pub fn mode_frequency(geom: &Geometry, d: u32, n: u64) -> f64 {
    (2.0 * n as f64 + d as f64 - 1.0) / (2.0 * geom.gamma)
}

/// Point in global coordinates `(t, r, θ_1..θ_{d-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub angles: Vec<f64>,
}

/// Point of the hyperboloid `(z⁰)² - Σ(zⁱ)² + (z^{d+1})² = ℓ²` in `R^{2,d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPoint {
    pub coords: Vec<f64>,
}

impl EmbeddingPoint {
    /// Relative violation of the hyperboloid constraint.
    pub fn hyperboloid_residual(&self, ell: f64) -> f64 {
        let n = self.coords.len();
        let time_like = self.coords[0].powi(2) + self.coords[n - 1].powi(2);
        let space_like: f64 = self.coords[1..n - 1].iter().map(|z| z * z).sum();
        ((time_like - space_like) - ell * ell).abs() / (ell * ell)
    }

    /// `η_AB Δz^A Δz^B` with signature `(-, +, ..., +, -)`.
    pub fn interval_to(&self, other: &EmbeddingPoint) -> f64 {
        let n = self.coords.len();
        let diff = |k: usize| self.coords[k] - other.coords[k];
        let spatial: f64 = (1..n - 1).map(|k| diff(k).powi(2)).sum();
        spatial - diff(0).powi(2) - diff(n - 1).powi(2)
    }
}

/// Unit vector on `S^{d-1}` from hyperspherical angles.
fn unit_vector(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut sin_prod = 1.0;
    for &theta in angles {
        out.push(sin_prod * theta.cos());
        sin_prod *= theta.sin();
    }
    out.push(sin_prod);
    out
}

/// Global-coordinate embedding
/// `z⁰ = √(ℓ²+r²) sin(t/ℓ)`, `zⁱ = r ωⁱ`, `z^{d+1} = √(ℓ²+r²) cos(t/ℓ)`.
pub fn embed(setup: &DetectorSetup, point: &SpacetimePoint) -> Result<EmbeddingPoint> {
    let ell = setup.ell("embed")?;
    if point.angles.len() + 1 != setup.d as usize {
        return Err(Error::domain(
            "embed",
            format!("{} angles given, need d - 1 = {}", point.angles.len(), setup.d - 1),
        ));
    }
    if !(point.r >= 0.0) {
        return Err(Error::domain("embed", format!("r = {} (need r >= 0)", point.r)));
    }
    let radius = ell.hypot(point.r);
    let phase = point.t / ell;
    let mut coords = Vec::with_capacity(setup.d as usize + 2);
    coords.push(radius * phase.sin());
    coords.extend(unit_vector(&point.angles).into_iter().map(|w| point.r * w));
    coords.push(radius * phase.cos());
    Ok(EmbeddingPoint { coords })
}

/// Squared geodesic interval between proper times τ and τ′ on the static
/// worldline, `2γ²(cos((τ-τ′)/γ) - 1)`, evaluated as `-4γ² sin²((τ-τ′)/2γ)`.
pub fn geodesic_interval(setup: &DetectorSetup, tau: f64, tau_prime: f64) -> Result<f64> {
    let geom = derive_geometry(setup)?;
    let half = (0.5 * (tau - tau_prime) / geom.gamma).sin();
    Ok(-4.0 * geom.gamma * geom.gamma * half * half)
}

/// Embedding-space difference `z(a) - z(b)`, with the time-like pair formed by
/// sum-to-product so nearby points do not lose digits:
/// `ρ_a sin φ_a - ρ_b sin φ_b = ρ_a (sin φ_a - sin φ_b) + (ρ_a - ρ_b) sin φ_b`.
pub fn embedding_difference(setup: &DetectorSetup, a: &SpacetimePoint, b: &SpacetimePoint) -> Result<Vec<f64>> {
    let za = embed(setup, a)?;
    let zb = embed(setup, b)?;
    let ell = setup.ell("embedding_difference")?;
    let (rho_a, rho_b) = (ell.hypot(a.r), ell.hypot(b.r));
    let (pa, pb) = (a.t / ell, b.t / ell);
    let (half, mid) = (0.5 * (a.t - b.t) / ell, 0.5 * (pa + pb));
    let (sh, (sm, cm)) = (half.sin(), mid.sin_cos());
    let n = za.coords.len();
    let mut diff: Vec<f64> = za.coords.iter().zip(&zb.coords).map(|(x, y)| x - y).collect();
    diff[0] = rho_a * 2.0 * cm * sh + (rho_a - rho_b) * pb.sin();
    diff[n - 1] = -rho_a * 2.0 * sm * sh + (rho_a - rho_b) * pb.cos();
    Ok(diff)
}

/// The same interval from the embedding coordinates of the two worldline
/// points `t = τℓ/γ, r = R` at fixed angles, contracted with `η_AB`.
pub fn geodesic_interval_embedded(
    setup: &DetectorSetup,
    tau: f64,
    tau_prime: f64,
    angles: &[f64],
) -> Result<f64> {
    let ell = setup.ell("geodesic_interval_embedded")?;
    let gamma = ell.hypot(setup.radial_position);
    let at = |t: f64| SpacetimePoint { t: t * ell / gamma, r: setup.radial_position, angles: angles.to_vec() };
    let diff = embedding_difference(setup, &at(tau), &at(tau_prime))?;
    let n = diff.len();
    let spatial: f64 = diff[1..n - 1].iter().map(|z| z * z).sum();
    Ok(spatial - diff[0] * diff[0] - diff[n - 1] * diff[n - 1])
}

/// `Γ(d-1) / ((4π)^{d/2} Γ(d/2))` in log form.
fn ln_wightman_constant(d: u32) -> Result<f64> {
    let d = d as f64;
    Ok(log_gamma(d - 1.0)? - 0.5 * d * (4.0 * PI).ln() - log_gamma(0.5 * d)?)
}

fn check_regulator(op: &'static str, eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("regulator eps = {eps} (need eps > 0)")))
    }
}

/// Pulled-back Wightman function
/// `W(s) = Γ(d-1)/((4π)^{d/2}Γ(d/2)) [2iγ sin(s/2γ - iε)]^{1-d}`.
///
/// The exponent `1-d` is an integer, so the power is single valued and is
/// taken by repeated multiplication.
pub fn wightman(setup: &DetectorSetup, s: f64, eps: f64) -> Result<Complex64> {
    check_regulator("wightman", eps)?;
    let geom = derive_geometry(setup)?;
    let c = ln_wightman_constant(setup.d)?.exp();
    Ok(c * wightman_kernel(setup.d, geom.gamma, s, eps))
}

/// `[2iγ sin(s/2γ - iε)]^{1-d}` without the constant prefactor.
pub(crate) fn wightman_kernel(d: u32, gamma: f64, s: f64, eps: f64) -> Complex64 {
    let x = s / (2.0 * gamma);
    let (sin_x, cos_x) = x.sin_cos();
    // 2iγ (sin x cosh ε - i cos x sinh ε)
    let base = Complex64::new(2.0 * gamma * cos_x * eps.sinh(), 2.0 * gamma * sin_x * eps.cosh());
    base.inv().powu(d - 1)
}

/// Partial sum of the binomial mode expansion of [`wightman`] through `n = N`.
pub fn wightman_mode_expansion(setup: &DetectorSetup, s: f64, eps: f64, n_max: u64) -> Result<Complex64> {
    check_regulator("wightman_mode_expansion", eps)?;
    let geom = derive_geometry(setup)?;
    let d = setup.d;
    let ln_pref = ln_wightman_constant(d)? - log_gamma(d as f64 - 1.0)? + (1.0 - d as f64) * geom.gamma.ln();
    let x = s / (2.0 * geom.gamma);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        let k = 2.0 * n as f64 + d as f64 - 1.0;
        let magnitude = (gamma_ratio_log(d, n)? - k * eps + ln_pref).exp();
        sum += Complex64::from_polar(magnitude, -k * x);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(d: u32, ell: f64, r: f64) -> DetectorSetup {
        DetectorSetup::ads(d, ell, r, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn geometry_examples() {
        let g = derive_geometry(&setup(3, 1.0, 0.0)).unwrap();
        assert_eq!(g.gamma, 1.0);
        assert_eq!(g.curvature, -12.0);
        assert_eq!(g.omega_d, 1.0);
        let g = derive_geometry(&setup(3, 1.0, 0.1)).unwrap();
        assert_eq!(g.gamma, 1.01f64.sqrt());
        assert!(matches!(
            derive_geometry(&DetectorSetup::minkowski(3, 1.0, 1.0, 1.0).unwrap()),
            Err(Error::MinkowskiSentinel(_))
        ));
    }

    #[test]
    fn alpha_matches_direct_formula() {
        let s = DetectorSetup::ads(4, 2.0, 0.3, 1.3, 0.7, 1.0).unwrap();
        let g = derive_geometry(&s).unwrap();
        let direct = 0.49 * 1.69 * PI * g.gamma.powi(-3) / (4.0 * (4.0 * PI).powi(2) * 1.0);
        assert!((g.alpha / direct - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mode_frequency_examples() {
        let g = derive_geometry(&setup(3, 1.0, 0.0)).unwrap();
        assert_eq!(mode_frequency(&g, 3, 0), 1.0);
        assert_eq!(mode_frequency(&g, 3, 1), 2.0);
        let g = derive_geometry(&setup(5, 2.0, 0.0)).unwrap();
        assert_eq!(mode_frequency(&g, 5, 3), 2.5);
    }

    #[test]
    fn embedding_examples() {
        let s = setup(3, 1.0, 0.0);
        let z = embed(&s, &SpacetimePoint { t: 0.0, r: 0.0, angles: vec![0.3, 1.0] }).unwrap();
        assert_eq!(z.coords, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let z = embed(&s, &SpacetimePoint { t: PI / 2.0, r: 0.0, angles: vec![0.3, 1.0] }).unwrap();
        assert_eq!(z.coords[0], 1.0);
        assert!(z.coords[4].abs() < 1e-16);
        assert!(embed(&s, &SpacetimePoint { t: 0.0, r: 0.0, angles: vec![] }).is_err());
    }

    #[test]
    fn geodesic_examples() {
        let s = setup(3, 1.0, 0.1);
        let gamma = 1.01f64.sqrt();
        assert_eq!(geodesic_interval(&s, 0.4, 0.4).unwrap(), 0.0);
        let v = geodesic_interval(&s, PI * gamma, 0.0).unwrap();
        assert!((v + 4.0 * gamma * gamma).abs() < 1e-14);
        let closed = geodesic_interval(&s, 0.3, 0.0).unwrap();
        let embedded = geodesic_interval_embedded(&s, 0.3, 0.0, &[0.2, 0.4]).unwrap();
        assert!((closed / embedded - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wightman_at_origin() {
        let s = setup(3, 1.0, 0.0);
        let eps = 0.05;
        let w = wightman(&s, 0.0, eps).unwrap();
        let expected = 1.0 / ((4.0 * PI).powf(1.5) * (PI.sqrt() / 2.0)) / (2.0 * eps.sinh()).powi(2);
        assert!((w.re / expected - 1.0).abs() < 1e-14);
        assert!(w.im.abs() < 1e-14 * expected);
        assert!(wightman(&s, 0.0, 0.0).is_err());
    }

    #[test]
    fn wightman_periodicity() {
        for d in 2..=5 {
            let s = setup(d, 1.0, 0.1);
            let gamma = 1.01f64.sqrt();
            let w0 = wightman(&s, 0.7, 0.02).unwrap();
            // Shifting by one period of sin flips the sign of the base, so
            // the value picks up (-1)^{d-1}.
            let w1 = wightman(&s, 0.7 + 2.0 * PI * gamma, 0.02).unwrap();
            let sign = if d % 2 == 0 { -1.0 } else { 1.0 };
            assert!((w1 - w0 * sign).norm() < 1e-12 * w0.norm(), "d = {d}");
            let w2 = wightman(&s, 0.7 + 4.0 * PI * gamma, 0.02).unwrap();
            assert!((w2 - w0).norm() < 1e-12 * w0.norm(), "d = {d}");
        }
    }

    #[test]
    fn mode_expansion_converges() {
        let s = setup(3, 1.0, 0.1);
        let w = wightman(&s, 0.5, 0.05).unwrap();
        let m = wightman_mode_expansion(&s, 0.5, 0.05, 400).unwrap();
        assert!((w - m).norm() < 1e-10 * w.norm());
        let s2 = setup(2, 1.0, 0.0);
        let single = wightman_mode_expansion(&s2, 0.0, 0.1, 0).unwrap();
        let expected = (-0.1f64).exp() / (4.0 * PI);
        assert!((single.re - expected).abs() < 1e-16);
    }
}
