//! Replays the checked-in fuzz seeds through the parsers they target.

use std::fs;
use std::path::PathBuf;

use giant_atoms::sweep::parse_phi;
use giant_atoms::{Configuration, ConnectionLayout, PairId};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| fs::read_to_string(entry.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn layout_seeds() {
    let mut accepted = 0;
    for text in seeds("parse_layout") {
        if let Ok(layout) = ConnectionLayout::from_json(&text) {
            accepted += 1;
            assert_eq!(ConnectionLayout::from_json(&layout.to_json()).unwrap(), layout);
            let _ = Configuration::Custom(layout).coefficients(0.7, 1.0);
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn phi_seeds() {
    for text in seeds("parse_phi") {
        if let Ok(phi) = parse_phi(&text) {
            assert!(phi.is_finite(), "{text:?}");
        }
    }
}

#[test]
fn name_seeds() {
    for text in seeds("parse_names") {
        if let Ok(pair) = text.parse::<PairId>() {
            assert_eq!(pair.name().parse::<PairId>().unwrap(), pair);
        }
        if let Ok(config) = text.parse::<Configuration>() {
            assert!(config.is_preset());
        }
    }
}
