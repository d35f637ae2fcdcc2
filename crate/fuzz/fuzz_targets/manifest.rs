#![no_main]

use libfuzzer_sys::fuzz_target;
use qiul::io::StackManifest;

fuzz_target!(|text: &str| {
    if let Ok(m) = StackManifest::parse(text) {
        assert_eq!(StackManifest::parse(&m.to_json()).unwrap(), m);
    }
});
