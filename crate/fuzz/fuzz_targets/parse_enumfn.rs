#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::truestage::{build_stage_order, expand_prime, extract_descending, EnumFn};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(f) = EnumFn::parse(text) else { return };
    if f.horizon() <= 64 {
        let order = build_stage_order(&f);
        let _ = extract_descending(&f);
        let _ = expand_prime(&order);
    }
});
