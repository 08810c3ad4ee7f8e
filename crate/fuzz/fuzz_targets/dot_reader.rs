#![no_main]

use invmirror::export::parse_dot;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(g) = parse_dot(src) {
            for (a, b, _) in &g.edges {
                assert!(g.nodes.contains_key(a) && g.nodes.contains_key(b));
            }
        }
    }
});
