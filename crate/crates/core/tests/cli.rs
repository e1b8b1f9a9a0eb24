use std::fs;

use g2screen_core::cli::{self, EXIT_IO, EXIT_OK, EXIT_USAGE};
use g2screen_core::curve::GenusTwoCurve;
use g2screen_core::tables::{FALSE_POSITIVE, TABLE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("g2screen").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn lpoly_prints_trace_and_count() {
    let (code, out, _) = run(&["lpoly", "--curve", FALSE_POSITIVE, "--q", "151"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "a_q = 5");
    assert_eq!(lines[1], "#C(F_q) = 157");
    assert!(lines[2].starts_with("L_q(T) = 1 + (5)T + "));
    assert!(lines[2].ends_with("(755)T^3 + (22801)T^4"));
}

#[test]
fn lpoly_at_bad_prime_is_a_usage_error() {
    let (code, _, err) = run(&["lpoly", "--curve", FALSE_POSITIVE, "--q", "17"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));
}

#[test]
fn unknown_subcommand_and_help() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("group-tables"));
}

#[test]
fn twist_accepts_negative_d() {
    let (code, out, _) = run(&["twist", "--curve", TABLE[4].equation, "--d", "-3"]);
    assert_eq!(code, EXIT_OK);
    let printed = GenusTwoCurve::parse(out.trim()).unwrap();
    let expected = TABLE[4].curve().twist(-3).unwrap();
    assert_eq!(printed.f(), expected.f());
    assert_eq!(printed.h(), expected.h());
}

#[test]
fn screen_of_empty_list_writes_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.jsonl");
    fs::write(&input, "").unwrap();
    let (code, out, _) = run(&["screen", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("screened 0 curves"));
    assert_eq!(fs::read(&output).unwrap(), b"");
}

#[test]
fn screen_of_missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("out.jsonl");
    let (code, _, err) = run(&["screen", "--in", "/nonexistent/list.txt", "--out", output.to_str().unwrap()]);
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("/nonexistent/list.txt"));
}

#[test]
fn screen_rejects_unsupported_p() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, TABLE[0].curve().to_list_line()).unwrap();
    let out = dir.path().join("out.jsonl");
    let (code, _, _) = run(&["screen", "--p", "7", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn screen_writes_jsonl_for_passing_curves() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let lines: Vec<String> = TABLE.iter().take(3).map(|t| t.curve().to_list_line()).collect();
    fs::write(&input, lines.join("\n") + "\nnot-a-curve\n").unwrap();
    let output = dir.path().join("out.jsonl");
    let (code, _, _) = run(&["screen", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&output).unwrap();
    let reports: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0]["label"], "p3-01");
    assert!(reports[0]["verdicts"].as_array().unwrap().iter().any(|v| v["passed"] == true));
    let rejects = fs::read_to_string(dir.path().join("out.jsonl.rejects")).unwrap();
    assert!(rejects.starts_with("4\t"));
}

#[test]
fn group_tables_json_for_p3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.json");
    let (code, _, _) = run(&["group-tables", "--p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["orbit_table"]["G2304"], serde_json::json!([8, 32]));
    assert_eq!(v["orbit_table"]["G'480"], serde_json::json!([40]));
    assert_eq!(v["trace_zero"]["fraction"], "231/640");
    let g768 = v["groups"].as_array().unwrap().iter().find(|g| g["label"] == "G768").unwrap();
    assert_eq!(g768["order"], 768);
    assert_eq!(g768["sp4_abelianization"], serde_json::json!([6]));
}

#[test]
fn certify_writes_a_certificate() {
    let (code, out, _) = run(&["certify", "--p", "3", "--curve", TABLE[0].equation]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["p"], 3);
    assert_eq!(v["local"]["ordinary"], true);
    assert!(v["D"].is_u64());
    assert!(v["hypotheses"].as_array().unwrap().iter().all(|h| h["rigor"].is_string()));
}

#[test]
fn quick_selftest_runs() {
    let (code, out, _) = run(&["selftest", "--quick"]);
    assert!(out.contains("PASS trace-zero fraction, p = 3"));
    assert!(out.contains("PASS orbit table, p = 3"));
    for row in &TABLE {
        assert!(out.lines().any(|l| l.starts_with(row.label)));
    }
    assert_eq!(code == EXIT_OK, out.contains("selftest passed"));
    assert_eq!(code == cli::EXIT_SELFTEST, out.contains("selftest FAILED"));
}
