#![no_main]

use hgs::qudit_space::{config_at, config_count};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(wh) = hgs::io::parse_weighted(text) else { return };
    let q = wh.ring().order();
    let Ok(n) = config_count(q, wh.l()) else { return };
    if n > 4096 {
        return;
    }
    let table = hgs::hyperstate::phase_table(&hgs::canonicalize::weighted_to_calibrated(&wh)).unwrap();
    for (i, &phase) in table.iter().enumerate() {
        assert_eq!(hgs::hyperstate::weighted_phase_function(&wh, &config_at(q, wh.l(), i)).unwrap(), phase);
    }
});
