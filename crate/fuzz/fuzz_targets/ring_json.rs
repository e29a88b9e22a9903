#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ring) = hgs::io::parse_ring(text) {
        let back = hgs::io::parse_ring(&serde_json::to_string(&hgs::io::ring_to_json(&ring)).unwrap()).unwrap();
        assert_eq!(*ring, *back);
    }
});
