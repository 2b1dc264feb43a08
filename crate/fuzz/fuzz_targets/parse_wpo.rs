#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::maxtype::{height, max_order_type};
use wpo_core::WpoTerm;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = WpoTerm::parse(text) {
        assert_eq!(WpoTerm::parse(&t.to_string()).unwrap(), t);
        assert!(height(&t) <= max_order_type(&t));
    }
});
