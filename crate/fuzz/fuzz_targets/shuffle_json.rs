#![no_main]
use libfuzzer_sys::fuzz_target;
use wpo_core::maxtype::{shuffle_embed, ShufflePresentation};

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = serde_json::from_slice::<ShufflePresentation>(data) {
        let _ = shuffle_embed(&p);
    }
});
