#![no_main]

use libfuzzer_sys::fuzz_target;
use webtorsion::reducibility::{parse_index_list, RolePartition};

// input: n, then P, A and S lists separated by ';'
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut parts = text.split(';');
    let (Some(n), Some(p), Some(a)) = (parts.next(), parts.next(), parts.next()) else {
        return;
    };
    // S defaults to the complement, so very large n only measures allocation
    let Ok(n @ 0..=4096) = n.trim().parse::<usize>() else {
        return;
    };
    let (Ok(p), Ok(a)) = (parse_index_list(p), parse_index_list(a)) else {
        return;
    };
    let part = match parts.next().map(parse_index_list) {
        Some(Ok(s)) => RolePartition::with_blocks(n, &p, &a, &s),
        Some(Err(_)) => return,
        None => RolePartition::new(n, &p, &a),
    };
    if let Ok(part) = part {
        assert_eq!(part.p().len() + part.a().len() + part.s().len(), n);
        assert!(part.a().len() >= 2);
    }
});
