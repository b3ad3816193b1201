//! Dense real polynomials and the Bernoulli data used by Euler–Maclaurin.

use crate::error::{Error, Result};

/// Polynomial stored by ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `p(h x)`.
    pub fn rescale_argument(&self, h: f64) -> Self {
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * power;
                power *= h;
                v
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        Self::new((0..n).map(|k| at(&self.coeffs, k) - at(&other.coeffs, k)).collect())
    }
}

/// Coefficients `C_0..C_{d-2}` of `∏_{k=1}^{d-2} (γ x + k)` in ascending powers of `x`.
///
/// All coefficients are positive for `γ > 0`; `C_{d-2} = γ^{d-2}` and `C_0 = (d-2)!`.
pub fn prod_poly_coeffs(d: u32, gamma: f64) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::domain("prod_poly_coeffs", format!("d = {d} (need d >= 2)")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain("prod_poly_coeffs", format!("gamma = {gamma} (need 0 < gamma < inf)")));
    }
    let mut coeffs = vec![1.0];
    for k in 1..=(d - 2) {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c * k as f64;
            next[i + 1] += c * gamma;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Bernoulli numbers `B_2, B_4, ..., B_{2m}` and the periodic kernel `B_{2m}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliData {
    pub numbers: Vec<f64>,
    pub polynomial: Polynomial,
    /// `max_{x∈[0,1]} |B_{2m}(x)|`, attained at the endpoints.
    pub max_abs: f64,
}

/// Supported for `m ∈ {1, 2}`.
pub fn bernoulli_data(m: u32) -> Result<BernoulliData> {
    match m {
        1 => Ok(BernoulliData {
            numbers: vec![1.0 / 6.0],
            polynomial: Polynomial::new(vec![1.0 / 6.0, -1.0, 1.0]),
            max_abs: 1.0 / 6.0,
        }),
        2 => Ok(BernoulliData {
            numbers: vec![1.0 / 6.0, -1.0 / 30.0],
            polynomial: Polynomial::new(vec![-1.0 / 30.0, 0.0, 1.0, -2.0, 1.0]),
            max_abs: 1.0 / 30.0,
        }),
        _ => Err(Error::domain("bernoulli_data", format!("m = {m} (supported: 1, 2)"))),
    }
}
