#![no_main]

use abyss::universe::{parse_closed, parse_open};
use abyss::Surd;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let half = Surd::from(abyss::Rational::new(1, 2));
    if let Ok(o) = parse_open(s) {
        let _ = o.contains(&half);
    }
    if let Ok(c) = parse_closed(s) {
        let _ = c.contains(&half);
    }
});
