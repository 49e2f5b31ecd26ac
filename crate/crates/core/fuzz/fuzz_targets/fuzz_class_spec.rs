#![no_main]

use gm_series::classes::ClassSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = ClassSpec::parse(text);
    }
});
