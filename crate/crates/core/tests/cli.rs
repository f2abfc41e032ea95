use std::path::{Path, PathBuf};
use std::process::Command;

use passivity::problem::ProblemFile;
use serde_json::{json, Value};

fn problem(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (Value, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_passivity"))
        .args(args)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (value, stderr, out.status.code().unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("passivity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verdict_exit_codes() {
    let expected = [
        ("heat", "passive", 0),
        ("gradient_consistent", "passive", 0),
        ("gradient_inconsistent", "inconsistent", 3),
        ("obstructed", "not-passive", 2),
        ("coincident_merged", "passive", 0),
        ("coincident_inconsistent", "inconsistent", 3),
        ("wave_pair_elimination", "passive", 0),
    ];
    for (name, verdict, code) in expected {
        let (v, _, c) = run(&["check", &problem(name)]);
        assert_eq!((v["verdict"].as_str(), c), (Some(verdict), code), "{name}");
    }
}

#[test]
fn obstruction_is_reported() {
    let (v, _, _) = run(&["check", &problem("obstructed")]);
    let pair = &v["pairs"][0];
    assert_eq!(pair["status"], "obstructed");
    assert_eq!(pair["remainder"], json!([{"c": "1", "m": [[["u", 1, [0, 0]], 1]]}]));
    assert!(v["census"].is_null());
}

#[test]
fn reduce_examples() {
    let file = problem("first_order_single");
    let (v, _, c) = run(&["reduce", &file, "--target", r#"[{"c":"1","m":[[["u",1,[1,1]],1]]}]"#]);
    assert_eq!(c, 0);
    assert_eq!(v["text"], "1");
    assert_eq!(v["trace"], json!([{"eq": 0, "shift": [0, 1], "eliminated": ["u", 1, [1, 1]]}]));

    let (v, _, _) = run(&["reduce", &file, "--target", r#"[{"c":"1","m":[[["u",1,[2,0]],1]]}]"#]);
    assert_eq!(v["remainder"], json!([]));

    let constant = r#"[{"c":"1","m":[[["x",1],2]]},{"c":"3","m":[]}]"#;
    let (v, _, _) = run(&["reduce", &problem("heat"), "--target", constant]);
    assert_eq!(v["remainder"].to_string(), constant);
    assert_eq!(v["trace"], json!([]));
}

#[test]
fn target_from_file() {
    let target = scratch("target.json", r#"[{"c":"1","m":[[["u",1,[1,1]],1]]}]"#);
    let arg = format!("@{}", target.display());
    let (v, _, c) = run(&["reduce", &problem("first_order_single"), "--target", &arg]);
    assert_eq!((v["text"].as_str(), c), (Some("1"), 0));
}

#[test]
fn step_limit_exits_four() {
    let (_, err, c) = run(&[
        "reduce",
        &problem("heat"),
        "--max-steps",
        "1",
        "--target",
        r#"[{"c":"1","m":[[["u",1,[6,0]],1]]}]"#,
    ]);
    assert_eq!(c, 4, "{err}");
}

#[test]
fn input_errors_exit_one() {
    let malformed = scratch("malformed.json", "{\n  \"n\": 2,\n  \"m\": }");
    let (_, err, c) = run(&["check", malformed.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert!(err.contains("line 3"), "{err}");

    let (_, err, c) = run(&["check", "/nonexistent/problem.json"]);
    assert_eq!(c, 1, "{err}");

    let (_, err, c) = run(&["reduce", &problem("heat"), "--target", r#"[{"c":"1","m":[[["u",1,[1]],1]]}]"#]);
    assert_eq!(c, 1);
    assert!(err.contains("--target"), "{err}");

    let (_, _, c) = run(&["check", &problem("heat"), "--ranking", "lexicographic"]);
    assert_eq!(c, 1);

    let (_, _, c) = run(&["check", &problem("broken_ranking")]);
    assert_eq!(c, 1);

    let (_, _, c) = run(&["frobnicate"]);
    assert_eq!(c, 1);
}

#[test]
fn ranking_override() {
    let (v, _, c) = run(&["check", &problem("heat"), "--ranking", "elimination"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "passive");
    let (v, _, _) = run(&["check", &problem("heat"), "--ranking", "[[0,1,1],[0,1,0]]"]);
    assert_eq!(v["verdict"], "passive");
}

#[test]
fn syzygies_and_quotient() {
    let (v, _, c) = run(&["syzygies", &problem("gradient_consistent")]);
    assert_eq!(c, 0);
    assert_eq!(v, json!([{"i": 0, "j": 1, "shift_i": [0, 1], "shift_j": [1, 0]}]));

    let (v, _, c) = run(&["quotient", &problem("heat"), "--order", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["census"]["parametric"].as_array().unwrap().len(), 5);
    assert_eq!(v["census"]["counts"], json!({"0": 1, "1": 2, "2": 2}));

    let (v, _, c) = run(&["quotient", &problem("obstructed")]);
    assert_eq!((v["census"].clone(), c), (Value::Null, 2));
}

#[test]
fn ranking_audit_reports() {
    let (v, _, c) = run(&["ranking-audit", &problem("heat"), "--samples", "300"]);
    assert_eq!(c, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["sampled_checks"], 300);

    let (v, _, c) = run(&["ranking-audit", &problem("broken_ranking"), "--samples", "300"]);
    assert_eq!(c, 2);
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn pretty_output_is_text() {
    let out = Command::new(env!("CARGO_BIN_EXE_passivity"))
        .args(["check", &problem("heat"), "--pretty"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("verdict: passive\n"), "{text}");
    let (_, _, c) = run(&["check", &problem("heat"), "--pretty", "--json"]);
    assert_eq!(c, 1);
}

#[test]
fn corpus_round_trips() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = ProblemFile::parse(&text).unwrap();
        let second = ProblemFile::parse(&first.to_text()).unwrap();
        assert_eq!(first, second, "{}", path.display());
        assert_eq!(first.to_text(), second.to_text());
    }
}
