use std::process::Command;

use parageo::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("parageo").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn reproduce_example_passes_and_notes_discrepancies() {
    let (code, out, _) = run(&["reproduce-example"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1/sqrt(2)"), "{out}");
    assert!(out.contains("0.5"));
}

#[test]
fn json_report_is_deterministic() {
    let (a, first, _) = run(&["reproduce-example", "--json"]);
    let (b, second, _) = run(&["reproduce-example", "--json"]);
    assert_eq!((a, b), (0, 0));
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(v.get("summary").is_some(), "{first}");
}

#[test]
fn out_writes_the_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, text, _) = run(&["analyze", "builtin:product", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let written = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["scene"], "product");
}

#[test]
fn forbidden_orientation_fails_with_exit_one() {
    let (code, out, _) = run(&["check-warped", "builtin:forbidden-orientation", "anti-invariant-base"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("warping forced constant"), "{out}");
}

#[test]
fn usage_and_scene_errors_exit_two() {
    let (code, _, err) = run(&["analyze", "/nonexistent/scene.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/scene.toml"), "{err}");
    let (code, _, err) = run(&["check-slant", "builtin:cone", "Dnope"]);
    assert_eq!(code, 2);
    assert!(err.contains("Dnope"), "{err}");
    assert_eq!(run(&["analyze", "builtin:nope"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["show-scene", "nope"]).0, 2);
}

#[test]
fn scene_file_with_bad_expression_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let src = parageo::corpus::CONE.replacen("x1*cos(x2)", "x1*cos(x2", 1);
    assert_ne!(src, parageo::corpus::CONE);
    std::fs::write(&path, src).unwrap();
    let (code, _, err) = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("coords"), "{err}");
}

#[test]
fn show_scene_round_trips_through_a_file() {
    let (code, src, _) = run(&["show-scene", "anti-invariant-graph"]);
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, &src).unwrap();
    let (code, out, _) = run(&["check-slant", path.to_str().unwrap(), "Dbot", "--grid", "2", "--seed", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("anti-invariant"), "{out}");
}

#[test]
fn verify_ambient_on_the_cone() {
    let (code, out, _) = run(&["verify-ambient", "builtin:cone"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn binary_exit_code_matches_the_library() {
    let status = Command::new(env!("CARGO_BIN_EXE_parageo"))
        .args(["check-warped", "builtin:forbidden-orientation", "anti-invariant-base"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = Command::new(env!("CARGO_BIN_EXE_parageo")).arg("--version").output().unwrap();
    assert_eq!(status.status.code(), Some(0));
}
