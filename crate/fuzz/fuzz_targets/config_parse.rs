#![no_main]

use exitplan::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_json(text) {
        // anything accepted must be usable by the planner without panicking
        let _ = exitplan::optimizer::solve_discrete(
            &cfg.link,
            &cfg.compute,
            &cfg.profile,
            &cfg.quantizer,
            &cfg.exits,
            cfg.target_accuracy,
        );
    }
});
