use adsmagic::specfn::{golden_reports, golden_tolerance};

#[test]
fn special_functions_match_goldens() {
    let mut failures = Vec::new();
    for r in golden_reports().unwrap() {
        println!("{:<16} points={:<3} max_rel={:.3e}", r.function_name, r.points, r.max_rel_error);
        assert!(r.points >= 20, "{} has only {} golden points", r.function_name, r.points);
        if r.max_rel_error > golden_tolerance(&r.function_name) {
            failures.push(r.function_name.clone());
        }
    }
    assert!(failures.is_empty(), "out of tolerance: {failures:?}");
}
