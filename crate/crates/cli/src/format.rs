/// Shortest decimal that parses back to the same `f64`. Plain notation in
/// `[1e-5, 1e16)`, exponent notation elsewhere, `inf` and `nan` for the
/// non-finite values. Negative zero is written as `0`.
pub fn number(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::number;

    #[test]
    fn round_trips() {
        for x in [0.0, 1.0, -2.5, 0.1 + 0.2, 1e-5, 9.99e-6, 1e16, 6.02e23, 1.23e-300, f64::MIN_POSITIVE, 5e-324] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(number(f64::INFINITY), "inf");
        assert_eq!(number(1.5e-7), "1.5e-7");
        assert_eq!(number(0.25), "0.25");
        assert!(number(f64::NAN).parse::<f64>().unwrap().is_nan());
    }
}
