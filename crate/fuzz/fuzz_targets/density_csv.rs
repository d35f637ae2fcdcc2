#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::io::{parse_density, write_density};

fuzz_target!(|text: &str| {
    if let Ok(d) = parse_density(text) {
        let back = parse_density(&write_density(&d)).unwrap();
        assert_eq!(back.values, d.values);
        assert_eq!((back.grid_d.len, back.grid_u.len), (d.grid_d.len, d.grid_u.len));
    }
});
