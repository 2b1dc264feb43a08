use serde_json::Value;
use wpo_cli::run;

fn json(args: &[&str]) -> (i32, Value) {
    let argv: Vec<&str> = std::iter::once("wpo").chain(args.iter().copied()).collect();
    let out = run(&argv);
    let v = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out.stdout).expect("stdout is JSON")
    };
    (out.code, v)
}

#[test]
fn documented_results() {
    assert_eq!(json(&["ord", "nsum", "w+1", "w"]).1["result"], "w*2+1");
    assert_eq!(
        json(&["wpo", "otype", "ord(w) <+> ord(w+1)"]).1["result"],
        "w*2+1"
    );
    assert_eq!(json(&["oracle", "rank", "fin{3;}"]).1["result"], 3);
    assert_eq!(json(&["ord", "add", "w+1", "w"]).1["result"], "w*2");
    assert_eq!(
        json(&["wpo", "height", "ord(w) <+> ord(w+1)"]).1["result"],
        "w+1"
    );
    assert_eq!(
        json(&["ord", "eval", "--normalize", "w+w^2+3"]).1["result"],
        "w^2+3"
    );
}

#[test]
fn reports_carry_schema_and_checks() {
    let (code, v) = json(&["wpo", "mle", "ord(w+1) <+> ord(w)", "--at", "w*2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], wpo_cli::SCHEMA);
    assert_eq!(v["command"], "wpo mle");
    assert_eq!(v["result"]["at"]["element"], "L(w)");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn domain_errors_exit_one_with_structured_error() {
    let (code, v) = json(&["ord", "sub", "w", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NotLessOrEqual");
    let (code, v) = json(&["wpo", "chain", "ord(w)", "--at", "w"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "PositionOutOfRange");
    let (code, v) = json(&["oracle", "rank", "ord(w)"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "InfiniteTerm");
    let (code, _) = json(&["oracle", "rank", "fin{5;}", "--max-size", "3"]);
    assert_eq!(code, 1);
    let (code, v) = json(&["truestage", "build", "1,2,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NotInjective");
}

#[test]
fn parse_and_usage_errors_exit_two() {
    assert_eq!(json(&["ord", "cmp", "w+", "1"]).0, 2);
    assert_eq!(json(&["wpo", "otype", "ord(w) <+>"]).0, 2);
    assert_eq!(json(&["ord", "eval", "w^(w^(w))", "--depth-cap", "2"]).0, 2);
    assert_eq!(json(&["schmidt", "extract", "/nonexistent.json"]).0, 2);
    let out = run(["wpo", "ord", "frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
}

#[test]
fn pretty_output_is_text() {
    let out = run(["wpo", "--pretty", "ord", "nsum", "w+1", "w"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("result: w*2+1"));
}

#[test]
fn crosscheck_agrees_with_oracles() {
    for t in [
        "ord(w) <+> ord(w)",
        "(ord(w) ++ fin{2; 0<1}) <+> ord(w^2)",
        "fin{4; 0<1, 2<3} ++ ord(w*2)",
    ] {
        for k in 1..4 {
            let (code, v) = json(&["oracle", "crosscheck", t, &k.to_string()]);
            assert_eq!(code, 0, "{t} {k}: {v}");
        }
    }
}

#[test]
fn single_criterion_runs() {
    let (code, v) = json(&["selftest", "--criterion", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["criteria"][0]["id"], 5);
    assert_eq!(json(&["selftest", "--criterion", "13"]).0, 2);
}
