#![no_main]

use hgs::qudit_space::{config_at, config_count};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(ph) = hgs::io::parse_poly(text) else { return };
    let Ok(cal) = hgs::canonicalize::poly_to_calibrated(&ph) else { return };
    let q = ph.ring().order();
    if config_count(q, ph.l()).is_ok_and(|n| n <= 4096) {
        let table = hgs::hyperstate::phase_table(&cal).unwrap();
        for (i, &phase) in table.iter().enumerate() {
            assert_eq!(hgs::hyperstate::poly_phase_function(&ph, &config_at(q, ph.l(), i)).unwrap(), phase);
        }
    }
});
