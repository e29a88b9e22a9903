#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(hg) = hgs::io::parse_hypergraph(text) {
        assert!(hg.l() <= hgs::io::MAX_INPUT_L);
    }
});
