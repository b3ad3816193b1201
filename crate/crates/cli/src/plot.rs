//! Static SVG line charts from sweep CSV files.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const TICKS: usize = 6;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Groups `(x, y)` pairs of a CSV by the value of `group_by`, keeping the
/// order in which groups first appear. Rows with non-finite values are skipped.
pub fn series_from_csv(text: &str, x: &str, y: &str, group_by: &str) -> Result<Vec<Series>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| anyhow!("column {name:?} not found in CSV"))
    };
    let (xi, yi, gi) = (col(x)?, col(y)?, col(group_by)?);
    let mut groups: Vec<Series> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let (Ok(xv), Ok(yv)) = (rec[xi].parse::<f64>(), rec[yi].parse::<f64>()) else {
            continue;
        };
        if !xv.is_finite() || !yv.is_finite() {
            continue;
        }
        let label = format!("{group_by} = {}", &rec[gi]);
        match groups.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((xv, yv)),
            None => groups.push(Series { label, points: vec![(xv, yv)] }),
        }
    }
    let total: usize = groups.iter().map(|s| s.points.len()).sum();
    if total == 0 {
        bail!("no plottable rows");
    }
    if total < 2 {
        bail!("degenerate data: a line chart needs at least two points");
    }
    Ok(groups)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn tick_label(v: f64, span: f64) -> String {
    let mag = v.abs().max(span);
    if mag != 0.0 && !(1e-2..1e4).contains(&mag) {
        return format!("{v:.2e}");
    }
    let decimals = (2.0 - (span / (TICKS - 1) as f64).log10().floor()).clamp(0.0, 6.0) as usize;
    format!("{v:.decimals$}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(series: &[Series], x_label: &str, y_label: &str, title: &str) -> Result<String> {
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    if all().count() < 2 {
        bail!("degenerate data: a line chart needs at least two points");
    }
    let (x0, x1) = bounds(all().map(|p| p.0));
    let (y0, y1) = bounds(all().map(|p| p.1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="13">"#
    )?;
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#, LEFT + pw / 2.0, escape(title))?;
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    )?;
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let xv = x0 + f * (x1 - x0);
        let px = sx(xv);
        writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 6.0)?;
        writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 22.0,
            tick_label(xv, x1 - x0)
        )?;
        let yv = y0 + f * (y1 - y0);
        let py = sy(yv);
        writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 6.0)?;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 10.0,
            py + 4.0,
            tick_label(yv, y1 - y0)
        )?;
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    )?;
    writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    )?;
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "))?;
        let ly = TOP + 10.0 + 22.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 25.0)?;
        writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 32.0, ly + 4.0, escape(&ser.label))?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "omega,mana,ell\n0.1,0.2,1\n0.2,0.3,1\n0.1,0.1,5\n0.2,0.4,5\n";

    #[test]
    fn groups_in_order_of_appearance() {
        let s = series_from_csv(CSV, "omega", "mana", "ell").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].label, "ell = 5");
        let svg = render_svg(&s, "omega", "mana", "t").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
    }

    #[test]
    fn errors() {
        assert!(series_from_csv(CSV, "omega", "nope", "ell").is_err());
        assert!(series_from_csv("omega,mana,ell\n0.1,0.2,1\n", "omega", "mana", "ell").is_err());
        assert!(series_from_csv("omega,mana,ell\n", "omega", "mana", "ell").is_err());
    }
}
