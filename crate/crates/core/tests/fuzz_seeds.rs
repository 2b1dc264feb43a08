//! Replays the checked-in fuzz corpus through the same entry points the fuzz
//! targets exercise.

use std::fs;
use std::path::PathBuf;

use serde::Deserialize;
use wpo_core::maxtype::{
    height, max_order_type, schmidt_extract, shuffle_embed, ShufflePresentation,
};
use wpo_core::truestage::{build_stage_order, expand_prime, extract_descending, EnumFn};
use wpo_core::{Element, FinitePoset, Ordinal, WpoTerm};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds for {target}");
    paths.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn texts(target: &str) -> Vec<String> {
    seeds(target)
        .into_iter()
        .filter_map(|b| String::from_utf8(b).ok())
        .collect()
}

#[test]
fn ordinal_seeds() {
    let mut ok = 0;
    for text in texts("parse_ordinal") {
        if let Ok(a) = Ordinal::parse(&text) {
            assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
            ok += 1;
        }
        let _ = Ordinal::parse_normalizing(&text, 16);
    }
    assert!(ok > 0);
}

#[test]
fn term_seeds() {
    for text in texts("parse_wpo") {
        if let Ok(t) = WpoTerm::parse(&text) {
            assert_eq!(WpoTerm::parse(&t.to_string()).unwrap(), t);
            assert!(height(&t) <= max_order_type(&t));
        }
    }
}

#[test]
fn element_and_poset_seeds() {
    for text in texts("parse_element") {
        if let Ok(x) = Element::parse(&text) {
            assert_eq!(Element::parse(&x.to_string()).unwrap(), x);
        }
    }
    for text in texts("parse_poset") {
        if let Ok(p) = FinitePoset::parse(&text) {
            assert_eq!(FinitePoset::parse(&p.to_string()).unwrap(), p);
        }
    }
}

#[test]
fn enumeration_seeds() {
    for text in texts("parse_enumfn") {
        let Ok(f) = EnumFn::parse(&text) else {
            continue;
        };
        if f.horizon() <= 64 {
            let order = build_stage_order(&f);
            let _ = extract_descending(&f);
            let _ = expand_prime(&order);
        }
    }
}

#[test]
fn shuffle_seeds() {
    for data in seeds("shuffle_json") {
        if let Ok(p) = serde_json::from_slice::<ShufflePresentation>(&data) {
            let _ = shuffle_embed(&p);
        }
    }
}

#[derive(Deserialize)]
struct SchmidtInput {
    wpo: String,
    rows: Vec<Vec<String>>,
    horizon: usize,
}

#[test]
fn schmidt_seeds() {
    for data in seeds("schmidt_json") {
        let Ok(input) = serde_json::from_slice::<SchmidtInput>(&data) else {
            continue;
        };
        let Ok(t) = WpoTerm::parse(&input.wpo) else {
            continue;
        };
        let rows: Option<Vec<Vec<Element>>> = input
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| Element::parse(c).ok().filter(|x| t.validate_element(x)))
                    .collect()
            })
            .collect();
        let Some(rows) = rows else { continue };
        if let Ok(res) = schmidt_extract(&rows, input.horizon, |a, b| t.leq(a, b).unwrap()) {
            assert!(res.g.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

fn all_text_seeds() -> Vec<String> {
    [
        "parse_ordinal",
        "parse_wpo",
        "parse_element",
        "parse_poset",
        "parse_enumfn",
    ]
    .iter()
    .flat_map(|t| texts(t))
    .collect()
}

fn parse_everything(text: &str) {
    if let Ok(a) = Ordinal::parse(text) {
        assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
    }
    if let Ok(t) = WpoTerm::parse(text) {
        assert_eq!(WpoTerm::parse(&t.to_string()).unwrap(), t);
    }
    if let Ok(x) = Element::parse(text) {
        assert_eq!(Element::parse(&x.to_string()).unwrap(), x);
    }
    if let Ok(p) = FinitePoset::parse(text) {
        assert_eq!(FinitePoset::parse(&p.to_string()).unwrap(), p);
    }
    let _ = EnumFn::parse(text);
}

proptest::proptest! {
    #[test]
    fn random_text_never_panics(text in "[-w0-9^*+()<>{};,#LR\\[\\] ]{0,40}") {
        parse_everything(&text);
    }

    #[test]
    fn mutated_seeds_never_panic(pick in 0usize..1000, at in 0usize..64, junk in "[-w0-9^*+()<>{};,#LR ]{0,3}") {
        let seeds = all_text_seeds();
        let seed = &seeds[pick % seeds.len()];
        let mut cut = at.min(seed.len());
        while !seed.is_char_boundary(cut) {
            cut -= 1;
        }
        parse_everything(&format!("{}{junk}{}", &seed[..cut], &seed[cut..]));
        parse_everything(&seed[..cut]);
    }
}
