#![no_main]

use abyss::universe::parse_function;
use abyss::Surd;
use libfuzzer_sys::fuzz_target;

// First line: a function. Second line: a point.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Some((f, x)) = s.split_once('\n') else { return };
    let (Ok(f), Ok(x)) = (parse_function(f), x.trim().parse::<Surd>()) else { return };
    // errors are fine, panics are not
    let _ = f.eval(&x);
    let _ = f.local(&x);
});
