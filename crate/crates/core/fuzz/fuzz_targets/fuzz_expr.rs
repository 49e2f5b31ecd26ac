#![no_main]

use gm_series::sequences::Expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(expr) = Expr::parse(text) {
        for n in [1u64, 2, 7, 1 << 20] {
            let _ = expr.eval(n);
        }
    }
});
