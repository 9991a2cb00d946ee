//! Fuzz the flat key-value config parser: no panics, and accepted documents
//! must produce maps whose serialization parses back to the same map.
//!
//! Run with: cargo +nightly fuzz run parse_config

#![no_main]

use libfuzzer_sys::fuzz_target;
use uniq_core::textio::parse_key_values;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(map) = parse_key_values(src) else { return };

    for (key, value) in &map {
        assert!(!key.is_empty());
        assert!(
            key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-'),
            "accepted key {key:?}"
        );
        // Comments are stripped before values are captured, and records are
        // single lines; a value containing either would not round-trip.
        assert!(!value.contains('#') && !value.contains('\n'));
        assert_eq!(value.trim(), value, "value {value:?} kept outer whitespace");
    }

    let printed: String = map.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    let reparsed = parse_key_values(&printed).expect("printed form must parse");
    assert_eq!(map, reparsed);
});
