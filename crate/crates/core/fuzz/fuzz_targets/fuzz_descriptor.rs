#![no_main]

use gm_series::sequences::SequenceDescriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(seq) = SequenceDescriptor::from_json(text) {
        for n in 1..=16 {
            let _ = seq.term(n);
        }
    }
});
