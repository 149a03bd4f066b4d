#![no_main]

use abyss::universe::parse_set;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_set(s) {
        let _ = set.members_upto(8);
    }
});
