#![no_main]

use invmirror::aside::ACycle;
use invmirror::mf::BasicLabel;
use invmirror::Family;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(l) = src.parse::<BasicLabel>() {
        assert_eq!(l.to_string().parse::<BasicLabel>().ok(), Some(l));
    }
    if let Ok(c) = src.parse::<ACycle>() {
        assert_eq!(c.to_string().parse::<ACycle>().ok(), Some(c));
    }
    if let Ok(f) = src.parse::<Family>() {
        assert_eq!(f.to_string().parse::<Family>().ok(), Some(f));
    }
});
