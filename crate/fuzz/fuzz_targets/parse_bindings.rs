#![no_main]

use hamlift::cli::parse_bindings;
use hamlift::manifold::CoordSystem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let chart = CoordSystem::new(2, 1).unwrap();
    match parse_bindings(text, chart) {
        Ok(map) => assert!(map.keys().all(|c| chart.contains(*c))),
        Err(e) => assert!(e.position() <= text.len()),
    }
});
