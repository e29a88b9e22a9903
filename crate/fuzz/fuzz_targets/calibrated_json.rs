#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(hg) = hgs::io::parse_calibrated(text) {
        let back = hgs::io::parse_calibrated(&hgs::io::to_json_string(&hgs::io::calibrated_to_json(&hg))).unwrap();
        assert_eq!(hg, back);
        if hgs::qudit_space::config_count(hg.ring().order(), hg.l()).is_ok_and(|n| n <= 4096) {
            let psi = hgs::hyperstate::build_state(&hg).unwrap();
            let (k, _) = hgs::canonicalize::effectivize(&hg);
            assert!(hgs::hyperstate::build_state(&k).unwrap().eq_up_to_phase(&psi));
        }
    }
});
