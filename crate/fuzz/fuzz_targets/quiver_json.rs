#![no_main]

use invmirror::export::read_quiver_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok((n, arrows)) = read_quiver_json(src) {
            assert!(arrows.iter().all(|&(s, t)| s < n && t < n));
        }
    }
});
