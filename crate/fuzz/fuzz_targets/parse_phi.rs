#![no_main]

use giant_atoms::sweep::parse_phi;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(phi) = parse_phi(text) {
            assert!(phi.is_finite());
        }
    }
});
