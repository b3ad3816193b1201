//! One evaluated grid point, by any of the three methods.

use adsmagic::background::{derive_geometry, AdsRadius, DetectorSetup};
use adsmagic::closedform::{beta_closed, euler_maclaurin_correct, q_closed, EmTarget};
use adsmagic::mana::{harvest_point, mana_from_delta};
use adsmagic::oracle::{quad_beta, quad_q};
use adsmagic::series::{beta_series_with_regulator, q_series_with_regulator};
use anyhow::Result;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Exact mode series (default).
    Series,
    /// Large-radius closed forms.
    Closed,
    /// Quadrature of the regulated integrals; needs --eps.
    Quad,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Method as ValueEnum>::from_str(s, true)
    }
}

/// Parameters of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub d: u32,
    pub ell: AdsRadius,
    pub r: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub omega: f64,
}

impl Point {
    pub fn setup(&self) -> adsmagic::Result<DetectorSetup> {
        match self.ell {
            AdsRadius::Finite(ell) => DetectorSetup::ads(self.d, ell, self.r, self.sigma, self.lambda, self.omega),
            AdsRadius::Minkowski => DetectorSetup::minkowski(self.d, self.sigma, self.lambda, self.omega),
        }
    }
}

/// All observables at a point, with the diagnostics of the method used.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub gamma: f64,
    pub alpha: Option<f64>,
    pub q: f64,
    pub beta: f64,
    pub delta: f64,
    pub mana: f64,
    pub method: &'static str,
    pub epsilon: f64,
    pub n_terms: u64,
    pub trunc_err: f64,
    /// The term cap stopped a series before its tolerance was met.
    pub capped: bool,
}

/// Parses an AdS radius: a positive number, or `minkowski` / `inf` for flat space.
pub fn parse_radius(s: &str) -> std::result::Result<AdsRadius, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "minkowski" | "inf" | "infinity" => Ok(AdsRadius::Minkowski),
        other => other
            .parse::<f64>()
            .map(AdsRadius::Finite)
            .map_err(|_| format!("invalid AdS radius {s:?} (a number or `minkowski`)")),
    }
}

pub fn evaluate(point: &Point, method: Method, eps: Option<f64>, tol: f64) -> Result<Evaluation> {
    let setup = point.setup()?;
    let flat = setup.is_minkowski();
    let geometry = if flat { None } else { Some(derive_geometry(&setup)?) };
    let gamma = geometry.map_or(f64::INFINITY, |g| g.gamma);
    let alpha = geometry.map(|g| g.alpha);
    let from_parts = |q: f64, beta: f64, method, epsilon, n_terms, trunc_err, capped| {
        let delta = -(q + 2.0 * beta);
        Evaluation { gamma, alpha, q, beta, delta, mana: mana_from_delta(delta), method, epsilon, n_terms, trunc_err, capped }
    };
    match method {
        Method::Quad => {
            let eps = eps.ok_or_else(|| crate::UsageError("--method quad needs --eps > 0".into()))?;
            let q = quad_q(&setup, eps, tol.max(1e-12))?;
            let b = quad_beta(&setup, eps, tol.max(1e-12))?;
            Ok(from_parts(
                q.value,
                b.value,
                "quad",
                eps,
                (q.subdivisions + b.subdivisions) as u64,
                q.abs_error_estimate + b.abs_error_estimate,
                false,
            ))
        }
        Method::Series if eps.is_some() && !flat => {
            let eps = eps.unwrap_or_default();
            let q = q_series_with_regulator(&setup, eps, tol)?;
            let b = beta_series_with_regulator(&setup, eps, tol)?;
            Ok(from_parts(
                q.value,
                b.value,
                q.method.as_str(),
                eps,
                q.terms_used.max(b.terms_used),
                q.tail_bound + b.tail_bound,
                q.capped || b.capped,
            ))
        }
        Method::Closed if !flat => {
            let q = q_closed(&setup)?.value;
            let b = beta_closed(&setup)?.value;
            // Distance to the series estimated by the Euler-Maclaurin boundary terms.
            let eq = euler_maclaurin_correct(&setup, EmTarget::Q, 2)?;
            let eb = euler_maclaurin_correct(&setup, EmTarget::Beta, 2)?;
            let gap = |r: &adsmagic::closedform::ClosedFormResult| {
                r.em_correction.unwrap_or(0.0).abs() + r.em_residual_bound.unwrap_or(0.0)
            };
            Ok(from_parts(q, b, "closed", 0.0, 0, gap(&eq) + gap(&eb), false))
        }
        _ => {
            let p = harvest_point(&setup, tol)?;
            Ok(Evaluation {
                gamma,
                alpha,
                q: p.q,
                beta: p.beta,
                delta: p.delta,
                mana: p.mana,
                method: p.method.as_str(),
                epsilon: 0.0,
                n_terms: p.terms_used,
                trunc_err: p.trunc_err,
                capped: p.capped,
            })
        }
    }
}
