//! Special functions needed by the series, closed forms and Minkowski limits.
//!
//! Only real arguments are supported. Each function documents the domain on
//! which its accuracy is checked against the arbitrary-precision goldens in
//! `data/goldens.tsv`.

mod erf;
mod gamma;
mod hypergeometric;
mod incgamma;
mod poly;

pub use erf::{erf, erfc, erfi_scaled};
pub use gamma::{gamma, gamma_ratio_log, log_gamma};
pub use hypergeometric::{kummer_1f1, tricomi_u};
pub use incgamma::upper_inc_gamma;
pub use poly::{bernoulli_data, prod_poly_coeffs, BernoulliData, Polynomial};

pub(crate) use erf::exp_neg_half_sq;

use crate::error::{Error, Result};

/// Reference values produced with 60-digit arithmetic.
pub const GOLDENS: &str = include_str!("../../data/goldens.tsv");

/// One line of the goldens table.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRecord {
    pub function: String,
    pub args: Vec<f64>,
    pub value: f64,
}

/// Parses tab-separated `function  args  value` lines; `#` starts a comment line.
pub fn parse_goldens(text: &str) -> Result<Vec<GoldenRecord>> {
    let bad = |line: &str| Error::Contract(format!("malformed golden line: {line:?}"));
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut cols = line.split('\t');
            let (Some(function), Some(args), Some(value)) = (cols.next(), cols.next(), cols.next()) else {
                return Err(bad(line));
            };
            let args = args
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|_| bad(line)))
                .collect::<Result<Vec<_>>>()?;
            let value = value.trim().parse::<f64>().map_err(|_| bad(line))?;
            Ok(GoldenRecord { function: function.to_string(), args, value })
        })
        .collect()
}

/// Worst relative error of one function over its golden points.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub function_name: String,
    pub max_rel_error: f64,
    pub domain_tested: String,
    pub points: usize,
}

/// Compares `f` against every golden record named `name`.
///
/// An evaluation error counts as an infinite relative error.
pub fn accuracy_report<F>(records: &[GoldenRecord], name: &str, mut f: F) -> AccuracyReport
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut max_rel: f64 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut points = 0;
    for rec in records.iter().filter(|r| r.function == name) {
        points += 1;
        let last = *rec.args.last().unwrap_or(&f64::NAN);
        lo = lo.min(last);
        hi = hi.max(last);
        let rel = match f(&rec.args) {
            Ok(v) if rec.value == 0.0 => v.abs(),
            Ok(v) => ((v - rec.value) / rec.value).abs(),
            Err(_) => f64::INFINITY,
        };
        max_rel = max_rel.max(if rel.is_nan() { f64::INFINITY } else { rel });
    }
    AccuracyReport {
        function_name: name.to_string(),
        max_rel_error: max_rel,
        domain_tested: format!("last argument in [{lo}, {hi}]"),
        points,
    }
}

/// Accuracy reports for every special function with goldens.
pub fn golden_reports() -> Result<Vec<AccuracyReport>> {
    let records = parse_goldens(GOLDENS)?;
    Ok(vec![
        accuracy_report(&records, "log_gamma", |a| log_gamma(a[0])),
        accuracy_report(&records, "erfc", |a| Ok(erfc(a[0]))),
        accuracy_report(&records, "erfi_scaled", |a| erfi_scaled(a[0])),
        accuracy_report(&records, "kummer_1f1", |a| kummer_1f1(a[0], a[1], a[2])),
        accuracy_report(&records, "tricomi_u", |a| tricomi_u(a[0], a[1], a[2])),
        accuracy_report(&records, "upper_inc_gamma", |a| upper_inc_gamma(a[0], a[1])),
    ])
}

/// Accuracy each function is held to against the goldens.
pub fn golden_tolerance(function: &str) -> f64 {
    match function {
        "log_gamma" | "erfc" => 1e-13,
        "erfi_scaled" => 1e-12,
        "upper_inc_gamma" => 1e-11,
        "kummer_1f1" => 1e-10,
        "tricomi_u" => 1e-9,
        _ => 1e-12,
    }
}
