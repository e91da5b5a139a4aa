#![no_main]

use exitplan::fitting::{fit_affine, fit_exponential};
use exitplan::io::parse_depth_series;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(series) = parse_depth_series(text) {
        let _ = fit_affine(&series);
        let _ = fit_exponential(&series);
    }
});
