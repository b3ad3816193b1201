//! Sweep rows and their CSV form.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};

use crate::format::number;

pub const HEADER: [&str; 16] = [
    "d", "ell", "R", "sigma", "lambda", "omega", "gamma", "q", "beta", "delta", "mana", "method", "epsilon",
    "n_terms", "trunc_err", "flag",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: u32,
    /// `inf` for Minkowski.
    pub ell: f64,
    pub r: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub omega: f64,
    pub gamma: f64,
    pub q: f64,
    pub beta: f64,
    pub delta: f64,
    pub mana: f64,
    pub method: String,
    pub epsilon: f64,
    pub n_terms: u64,
    pub trunc_err: f64,
    /// `ok`, or the reason the row is not trustworthy.
    pub flag: String,
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            number(self.ell),
            number(self.r),
            number(self.sigma),
            number(self.lambda),
            number(self.omega),
            number(self.gamma),
            number(self.q),
            number(self.beta),
            number(self.delta),
            number(self.mana),
            self.method.clone(),
            number(self.epsilon),
            self.n_terms.to_string(),
            number(self.trunc_err),
            self.flag.clone(),
        ]
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        bail!("unexpected CSV header {:?}", header.join(","));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let f = |k: usize| -> Result<f64> {
            rec[k].parse().with_context(|| format!("line {line}, column {}: {:?}", HEADER[k], &rec[k]))
        };
        rows.push(SweepRow {
            d: rec[0].parse().with_context(|| format!("line {line}: d"))?,
            ell: f(1)?,
            r: f(2)?,
            sigma: f(3)?,
            lambda: f(4)?,
            omega: f(5)?,
            gamma: f(6)?,
            q: f(7)?,
            beta: f(8)?,
            delta: f(9)?,
            mana: f(10)?,
            method: rec[11].to_string(),
            epsilon: f(12)?,
            n_terms: rec[13].parse().with_context(|| format!("line {line}: n_terms"))?,
            trunc_err: f(14)?,
            flag: rec[15].to_string(),
        });
    }
    Ok(rows)
}
