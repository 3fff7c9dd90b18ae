#![no_main]

use giant_atoms::{Configuration, ConnectionLayout};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(layout) = ConnectionLayout::from_json(text) else {
        return;
    };
    // Anything the parser accepts must survive a round trip and yield coefficients.
    assert_eq!(ConnectionLayout::from_json(&layout.to_json()).unwrap(), layout);
    let _ = Configuration::Custom(layout).coefficients(0.7, 1.0);
});
