#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::dpsh::NoiseModel;
use qiul::units::{parse_length, parse_length_list, parse_length_range};

fuzz_target!(|text: &str| {
    if let Ok(x) = parse_length(text) {
        assert!(x.is_finite());
    }
    if let Ok(xs) = parse_length_list(text) {
        assert!(xs.iter().all(|x| x.is_finite()));
    }
    let _ = parse_length_range(text);
    if let Ok(n) = text.parse::<NoiseModel>() {
        // Display is the canonical form and must read back unchanged
        assert_eq!(n.to_string().parse::<NoiseModel>().unwrap(), n);
    }
});
