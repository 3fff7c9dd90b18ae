#![no_main]

use giant_atoms::{Configuration, InitialSign, Method, PairId};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pair) = text.parse::<PairId>() {
        assert_eq!(pair.name().parse::<PairId>().unwrap(), pair);
    }
    if let Ok(config) = text.parse::<Configuration>() {
        assert!(config.is_preset());
    }
    let _ = text.parse::<InitialSign>();
    let _ = text.parse::<Method>();
});
