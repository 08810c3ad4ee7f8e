#![no_main]

use invmirror::export::{format_fraction, parse_fraction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(x) = parse_fraction(src) {
            assert_eq!(parse_fraction(&format_fraction(x)).ok(), Some(x));
        }
    }
});
