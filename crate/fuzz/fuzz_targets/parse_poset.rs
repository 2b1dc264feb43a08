#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::FinitePoset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = FinitePoset::parse(text) {
        assert_eq!(FinitePoset::parse(&p.to_string()).unwrap(), p);
    }
});
