#![no_main]

use exitplan::io::parse_exit_variants;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_exit_variants(text);
    }
});
