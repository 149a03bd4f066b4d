#![no_main]

use abyss::universe::parse_points;
use abyss::Surd;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<Surd>() {
        assert_eq!(x.to_string().parse::<Surd>().unwrap(), x);
    }
    let _ = parse_points(s);
});
