#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::io::{parse_profile, write_profile};

fuzz_target!(|text: &str| {
    if let Ok(p) = parse_profile(text) {
        assert_eq!(parse_profile(&write_profile(&p)).unwrap(), p);
    }
});
