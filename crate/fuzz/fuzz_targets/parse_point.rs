#![no_main]

use libfuzzer_sys::fuzz_target;
use webtorsion::web::Point;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = Point::parse(text) {
            assert!(!p.is_empty());
        }
    }
});
