#![no_main]

use libfuzzer_sys::fuzz_target;
use webtorsion::expr::parse;

// an expression followed by '@' and a comma-separated point
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((expr, point)) = text.split_once('@') else {
        return;
    };
    let Ok(e) = parse(expr) else {
        return;
    };
    let pt: Vec<f64> = point
        .split(',')
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    for i in 1..=pt.len().min(4) {
        let d = e.diff(i);
        if let Ok(v) = d.eval(&pt) {
            assert!(v.is_finite());
        }
    }
});
