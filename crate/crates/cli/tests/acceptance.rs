//! Runs every acceptance criterion through the `wpo` binary and prints one
//! pass/fail line per criterion. Runs without the libtest harness so the
//! lines are always shown.

use std::process::Command;

use serde_json::Value;
use wpo_cli::DOCUMENTED_EXAMPLES;

const CRITERIA: usize = 12;

fn wpo(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_wpo"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("wpo runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn file_examples() -> Vec<Vec<&'static str>> {
    vec![
        vec!["shuffle", "embed", "testdata/shuffle.json"],
        vec!["schmidt", "extract", "testdata/schmidt.json"],
    ]
}

fn main() {
    // Two independent processes, started together.
    let again = std::thread::spawn(|| wpo(&["selftest"]));
    let (code, first) = wpo(&["selftest"]);
    let (_, second) = again.join().unwrap();
    let report: Value = serde_json::from_slice(&first).expect("selftest prints JSON");
    let criteria = report["result"]["criteria"]
        .as_array()
        .expect("criteria list");
    assert_eq!(criteria.len(), CRITERIA);

    // Byte-identical output across processes, for the suite itself and for
    // every documented example.
    let mut unstable = Vec::new();
    if first != second {
        unstable.push("selftest".to_string());
    }
    let mut examples: Vec<Vec<&str>> = DOCUMENTED_EXAMPLES.iter().map(|a| a.to_vec()).collect();
    examples.extend(file_examples());
    for args in &examples {
        let a = wpo(args);
        let b = wpo(args);
        if a != b || a.0 != 0 {
            unstable.push(args.join(" "));
        }
    }

    let mut failed = Vec::new();
    for c in criteria {
        let id = c["id"].as_u64().unwrap();
        let mut passed = c["passed"].as_bool().unwrap();
        let mut detail = format!("{} cases, {} failures", c["cases"], c["failures"]);
        if id == 12 {
            passed &= unstable.is_empty();
            detail.push_str(&format!(", {} cross-process reruns", examples.len() + 1));
        }
        println!(
            "criterion {id:>2} {:<34} {}  ({detail})",
            c["name"].as_str().unwrap(),
            if passed { "PASS" } else { "FAIL" }
        );
        if !passed {
            failed.push(id);
            println!("    examples: {}", c["examples"]);
        }
    }
    if !unstable.is_empty() {
        println!("    unstable: {unstable:?}");
    }
    if !failed.is_empty() || code != 0 {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {CRITERIA} criteria passed");
}
