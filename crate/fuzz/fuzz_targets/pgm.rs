#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::io::{read_pgm, write_pgm};

fuzz_target!(|bytes: &[u8]| {
    if let Ok(img) = read_pgm(bytes) {
        assert_eq!(read_pgm(&write_pgm(&img)).unwrap(), img);
    }
});
