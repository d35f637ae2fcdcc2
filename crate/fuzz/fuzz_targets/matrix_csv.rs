#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::io::{parse_matrix, write_matrix};

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

fuzz_target!(|text: &str| {
    if let Ok(img) = parse_matrix(text) {
        let back = parse_matrix(&write_matrix(&img)).unwrap();
        assert_eq!((back.width, back.height), (img.width, img.height));
        assert!(back.data.iter().zip(&img.data).all(|(a, b)| same(*a, *b)));
    }
});
