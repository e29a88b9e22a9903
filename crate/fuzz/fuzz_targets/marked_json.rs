#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((mh, xstar)) = hgs::io::parse_marked(text) {
        if hgs::qudit_space::config_count(mh.ring().order(), mh.l()).is_ok_and(|n| n <= 4096) {
            let direct = hgs::marked_cz::marked_state(&mh, xstar).unwrap();
            let via = hgs::marked_cz::marked_state_via_calibrated(&mh, xstar).unwrap();
            assert!(direct.eq_up_to_phase(&via));
        }
    }
});
