#![no_main]

use abyss::universe::parse_function;
use abyss::SymbolicFn;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_function(s) {
        // accepted functions survive a JSON round trip
        let back = SymbolicFn::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let _ = f.tags();
    }
});
