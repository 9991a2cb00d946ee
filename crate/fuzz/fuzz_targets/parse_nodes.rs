//! Fuzz the node-file parser: must never panic, and anything it accepts
//! must satisfy the documented postconditions and survive a print/reparse
//! round trip.
//!
//! Run with: cargo +nightly fuzz run parse_nodes

#![no_main]

use libfuzzer_sys::fuzz_target;
use uniq_core::nodes::NodeFamily;
use uniq_core::textio::parse_node_file;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(values) = parse_node_file(src) else { return };

    assert!(!values.is_empty());
    assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!(values.windows(2).all(|w| w[0] < w[1]), "accepted a non-increasing list");

    // Accepted lists must be valid custom node families.
    NodeFamily::custom(values.clone()).expect("parser accepted what the family rejects");

    // Shortest-roundtrip printing must reparse to the same values.
    let printed: String = values.iter().map(|v| format!("{v:?}\n")).collect();
    let reparsed = parse_node_file(&printed).expect("printed form must parse");
    assert_eq!(values, reparsed);
});
