#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::Element;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = Element::parse(text) {
        assert_eq!(Element::parse(&x.to_string()).unwrap(), x);
    }
});
