#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::Ordinal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = Ordinal::parse(text) {
        assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
    }
    let _ = Ordinal::parse_normalizing(text, 16);
});
