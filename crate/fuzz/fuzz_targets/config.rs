#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(cfg) = qiul::parse_config(text) {
        assert!(cfg.source.validate().is_ok());
        assert!(cfg.simulation.phases >= 3);
    }
});
