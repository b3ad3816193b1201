//! Detector density matrix, mana and the harvesting discriminant.
//!
//! To second order in the coupling the detector qutrit ends up in
//!
//! ```text
//!       | p   0   β* |
//! ρ  =  | 0   q   0  |      p = 1 - q
//!       | β   0   0  |
//! ```
//!
//! The ground-state population is not needed by the mana formula. It is set
//! to `1 - q` so that the trace is exactly one, with the second excited level
//! empty at this order. The matrix is then indefinite whenever `β ≠ 0`. That
//! is a property of the truncated perturbative state and is exposed through
//! [`DetectorState::min_eigenvalue`] rather than corrected.

use num_complex::Complex64;

use crate::background::DetectorSetup;
use crate::error::{Error, Result};
use crate::series::{
    beta_series_renormalized, delta_series, minkowski_beta, minkowski_q, q_series, SeriesMethod,
};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    pub q: f64,
    pub beta: Complex64,
    pub p: f64,
}

impl DetectorState {
    pub fn matrix(&self) -> [[Complex64; 3]; 3] {
        let z = Complex64::new(0.0, 0.0);
        let re = |x: f64| Complex64::new(x, 0.0);
        [
            [re(self.p), z, self.beta.conj()],
            [z, re(self.q), z],
            [self.beta, z, re(self.second_excited())],
        ]
    }

    /// `1 - p - q`, which vanishes at this order.
    pub fn second_excited(&self) -> f64 {
        0.0
    }

    pub fn trace(&self) -> f64 {
        self.p + self.q + self.second_excited()
    }

    /// Smallest eigenvalue; the matrix splits into `q` and a 2×2 block.
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.p;
        let c = self.second_excited();
        let mean = 0.5 * (a + c);
        let radius = (0.5 * (a - c)).hypot(self.beta.norm());
        (mean - radius).min(self.q)
    }
}

pub fn build_state(q: f64, beta: Complex64) -> Result<DetectorState> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("build_state", format!("q = {q} (need 0 <= q <= 1)")));
    }
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::domain("build_state", format!("beta = {beta} is not finite")));
    }
    Ok(DetectorState { q, beta, p: 1.0 - q })
}

/// `M = ln[1 - q + (|q - Re β - √3 Im β| + |q + 2 Re β| + |q - Re β + √3 Im β|)/3]`.
///
/// The three arguments add up to `3q`, so the bracket is evaluated as
/// `1 + (2/3) Σ max(-x, 0)`, which is exactly 1 when no argument is negative
/// and never below 1, so the logarithm is always defined for finite input.
pub fn mana(q: f64, beta: Complex64) -> Result<f64> {
    if !q.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::domain("mana", format!("non-finite input q = {q}, beta = {beta}")));
    }
    let (b, c) = (beta.re, SQRT_3 * beta.im);
    let negative = |x: f64| (-x).max(0.0);
    let shift = 2.0 / 3.0 * (negative(q - b - c) + negative(q + 2.0 * b) + negative(q - b + c));
    Ok(shift.ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarvestVerdict {
    pub delta: f64,
    pub harvestable: bool,
    pub mana_delta: f64,
}

/// Mana from the discriminant, `M_Δ = ln(1 + 2 max(Δ, 0)/3)`.
pub fn mana_from_delta(delta: f64) -> f64 {
    (2.0 * delta.max(0.0) / 3.0).ln_1p()
}

pub fn verdict(q: f64, beta_real: f64) -> Result<HarvestVerdict> {
    if !(q > 0.0) || !(beta_real <= 0.0) {
        return Err(Error::Contract(format!(
            "verdict requires q > 0 and real beta <= 0 (got q = {q}, beta = {beta_real})"
        )));
    }
    let delta = -(q + 2.0 * beta_real);
    Ok(HarvestVerdict { delta, harvestable: delta > 0.0, mana_delta: mana_from_delta(delta) })
}

/// Series values of every observable at one setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarvestPoint {
    pub omega: f64,
    pub q: f64,
    pub beta: f64,
    pub delta: f64,
    pub mana: f64,
    pub method: SeriesMethod,
    /// Largest number of terms used by the three series (0 for flat space).
    pub terms_used: u64,
    /// Sum of the absolute truncation bounds of `q` and `β`.
    pub trunc_err: f64,
    /// Some series hit the term cap before meeting the tolerance.
    pub capped: bool,
}

/// Evaluates `q`, `β`, `Δ` and `M` by the exact series, or by the flat-space
/// closed forms when the setup is Minkowski. In AdS `Δ` comes from its own
/// positive series so that it keeps full relative accuracy when `q ≈ -2β`.
pub fn harvest_point(setup: &DetectorSetup, tol: f64) -> Result<HarvestPoint> {
    setup.validate()?;
    if setup.is_minkowski() {
        let q = minkowski_q(setup.d, setup.sigma, setup.coupling, setup.gap)?;
        let beta = minkowski_beta(setup.d, setup.sigma, setup.coupling, setup.gap)?;
        let delta = -(q + 2.0 * beta);
        return Ok(HarvestPoint {
            omega: setup.gap,
            q,
            beta,
            delta,
            mana: mana_from_delta(delta),
            method: SeriesMethod::MinkowskiClosed,
            terms_used: 0,
            trunc_err: 0.0,
            capped: false,
        });
    }
    let q = q_series(setup, tol)?;
    let beta = beta_series_renormalized(setup, tol)?;
    let delta = delta_series(setup, tol)?;
    Ok(HarvestPoint {
        omega: setup.gap,
        q: q.value,
        beta: beta.value,
        delta: delta.value,
        mana: mana_from_delta(delta.value),
        method: SeriesMethod::Series,
        terms_used: q.terms_used.max(beta.terms_used).max(delta.terms_used),
        trunc_err: q.tail_bound + beta.tail_bound,
        capped: q.capped || beta.capped || delta.capped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManaCurve {
    pub points: Vec<HarvestPoint>,
    /// Index of the largest grid value.
    pub grid_argmax: usize,
    /// Location and value of the maximum after refining between the grid
    /// neighbours of `grid_argmax`.
    pub argmax: f64,
    pub max: f64,
}

const GOLDEN_ITERATIONS: usize = 80;

/// Mana along a gap grid, with the peak refined by golden-section search.
pub fn mana_curve(template: &DetectorSetup, omegas: &[f64], tol: f64) -> Result<ManaCurve> {
    if omegas.is_empty() {
        return Err(Error::Contract("empty gap grid".into()));
    }
    if omegas[0] <= 0.0 || omegas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("gap grid must be positive and strictly increasing".into()));
    }
    let points = omegas
        .iter()
        .map(|&w| harvest_point(&template.with_gap(w), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut grid_argmax = 0;
    for (i, p) in points.iter().enumerate() {
        if p.mana > points[grid_argmax].mana {
            grid_argmax = i;
        }
    }
    let m_at = |w: f64| harvest_point(&template.with_gap(w), tol).map(|p| p.mana);
    let (mut argmax, mut max) = (omegas[grid_argmax], points[grid_argmax].mana);
    if grid_argmax > 0 && grid_argmax + 1 < omegas.len() && max > 0.0 {
        let (mut a, mut b) = (omegas[grid_argmax - 1], omegas[grid_argmax + 1]);
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let (mut f1, mut f2) = (m_at(x1)?, m_at(x2)?);
        for _ in 0..GOLDEN_ITERATIONS {
            if b - a <= 1e-10 * b {
                break;
            }
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = m_at(x2)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = m_at(x1)?;
            }
        }
        let (x, f) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if f >= max {
            argmax = x;
            max = f;
        }
    }
    Ok(ManaCurve { points, grid_argmax, argmax, max })
}
