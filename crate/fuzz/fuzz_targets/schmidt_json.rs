#![no_main]
use libfuzzer_sys::fuzz_target;
use serde::Deserialize;
use wpo_core::maxtype::schmidt_extract;
use wpo_core::{Element, WpoTerm};

#[derive(Deserialize)]
struct Input {
    wpo: String,
    rows: Vec<Vec<String>>,
    horizon: usize,
}

fuzz_target!(|data: &[u8]| {
    let Ok(input) = serde_json::from_slice::<Input>(data) else {
        return;
    };
    let Ok(t) = WpoTerm::parse(&input.wpo) else {
        return;
    };
    let mut rows = Vec::new();
    for row in &input.rows {
        let mut parsed = Vec::new();
        for cell in row {
            match Element::parse(cell) {
                Ok(x) if t.validate_element(&x) => parsed.push(x),
                _ => return,
            }
        }
        rows.push(parsed);
    }
    if let Ok(res) = schmidt_extract(&rows, input.horizon, |a, b| t.leq(a, b).unwrap()) {
        assert!(res.g.windows(2).all(|w| w[0] < w[1]));
    }
});
