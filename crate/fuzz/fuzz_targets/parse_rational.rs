#![no_main]

use abyss::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(q) = s.parse::<Rational>() {
            // printing and parsing again gives the same value
            assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
        }
    }
});
