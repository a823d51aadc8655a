#![no_main]

use hamlift::cli::parse_expression;
use hamlift::manifold::CoordSystem;
use hamlift::symcore::structurally_equal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let chart = CoordSystem::new(2, 2).unwrap();
    if let Ok(e) = parse_expression(text, chart) {
        let printed = e.to_string();
        let back = parse_expression(&printed, chart).expect("printed form parses");
        assert!(structurally_equal(&back, &e), "{text:?} -> {printed}");
    }
});
