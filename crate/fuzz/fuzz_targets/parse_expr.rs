#![no_main]

use libfuzzer_sys::fuzz_target;
use webtorsion::expr::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = parse(text) {
        let printed = e.to_string();
        let back = parse(&printed).expect("printed expression reparses");
        assert_eq!(back, e, "{printed}");
    }
});
