#![no_main]

use invmirror::export::parse_window;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok((lo, hi)) = parse_window(src) {
            assert!(lo <= 0 && 0 <= hi);
            assert_eq!(parse_window(&format!("{lo}:{hi}")).ok(), Some((lo, hi)));
        }
    }
});
