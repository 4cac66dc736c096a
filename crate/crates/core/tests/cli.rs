use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const SAMPLE_PATH: &str = "reduce^Player1(1,5);noop^Player2\nnoop^Player1;reduce^Player2(2,2)\nreduce^Player1(2,1);noop^Player2\n";

fn gdlz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdlz")).args(args).env("GDLZ_COLOR", "0").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Writes the <5,3> game and the sample path into `dir`.
fn setup(dir: &Path) -> (String, String, String) {
    let d = dir.to_str().unwrap();
    assert_eq!(code(&gdlz(&["nim", "--heaps", "5,3", "--out-dir", d])), 0);
    let path = format!("{d}/sample.path");
    fs::write(&path, SAMPLE_PATH).unwrap();
    (format!("{d}/nim.model"), format!("{d}/nim.rules"), path)
}

#[test]
fn parse_echoes_and_reports_syntax_errors() {
    let ok = gdlz(&["parse", "vals(0,0)"]);
    assert_eq!((code(&ok), stdout(&ok)), (0, "vals(0,0)\n".to_string()));
    let bad = gdlz(&["parse", "vals(0,"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column 8"));
}

#[test]
fn parse_checks_rules_against_a_signature() {
    let dir = tempfile::tempdir().unwrap();
    let (model, rules, _) = setup(dir.path());
    let out = gdlz(&["parse", "--rules", &rules, "--signature", &model]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).matches("conforms").count(), 8);
    let stray = dir.path().join("stray.rules");
    fs::write(&stray, "wins(Nobody)\n").unwrap();
    let out = gdlz(&["parse", "--rules", stray.to_str().unwrap(), "--signature", &model]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("undeclared agent `Nobody`"));
}

#[test]
fn nim_rejects_empty_heaps() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gdlz(&["nim", "--heaps", "0", "--out-dir", dir.path().to_str().unwrap()])), 2);
}

#[test]
fn nim_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    setup(a.path());
    setup(b.path());
    for f in ["nim.model", "nim.rules"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn run_replays_the_sample_path() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _, path) = setup(dir.path());
    let out = gdlz(&["run", "--model", &model, "--actions", &path]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("stage")).count(), 4);
    assert_eq!(text.lines().last(), Some("complete; wins: Player1"));
}

#[test]
fn run_names_stage_and_agent_of_an_illegal_action() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _, _) = setup(dir.path());
    let bad = dir.path().join("bad.path");
    fs::write(&bad, "reduce^Player1(1,5);noop^Player2\nreduce^Player1(2,1);noop^Player2\n").unwrap();
    let out = gdlz(&["run", "--model", &model, "--actions", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stage 1") && err.contains("Player1"), "{err}");
}

#[test]
fn enumerate_counts_complete_paths() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for (heaps, n) in [("1", 1), ("2", 2)] {
        gdlz(&["nim", "--heaps", heaps, "--out-dir", d, "--name", "g"]);
        let out = gdlz(&["run", "--model", &format!("{d}/g.model"), "--enumerate"]);
        assert!(stdout(&out).contains(&format!("complete paths: {n}\n")), "{}", stdout(&out));
    }
}

#[test]
fn interactive_session_reaches_the_end() {
    let dir = tempfile::tempdir().unwrap();
    let (model, rules, _) = setup(dir.path());
    let mut child = Command::new(env!("CARGO_BIN_EXE_gdlz"))
        .args(["run", "--model", &model, "--interactive", "--rules", &rules])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let input = format!("garbage\nnoop^Player1;noop^Player2\n{SAMPLE_PATH}");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let text = stdout(&out);
    assert_eq!(code(&out), 0);
    assert!(text.contains("error:") && text.contains("rejected:"), "{text}");
    assert!(text.contains("rule 8: true"));
    assert_eq!(text.lines().last(), Some("complete; wins: Player1"));
}

#[test]
fn check_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (model, rules, path) = setup(dir.path());
    let out = gdlz(&["check", "--model", &model, "--path", &path, "--formula", "wins(Player1)", "--stage", "3"]);
    assert_eq!((code(&out), stdout(&out).lines().next()), (0, Some("RESULT true")));
    let out = gdlz(&["check", "--model", &model, "--path", &path, "--formula", "terminal", "--global"]);
    assert_eq!((code(&out), stdout(&out).lines().next()), (1, Some("RESULT false")));
    let out = gdlz(&["check", "--model", &model, "--is-model-of", &rules]);
    assert_eq!((code(&out), stdout(&out).lines().next()), (0, Some("RESULT holds")));
    let out = gdlz(&["check", "--model", &model, "--is-model-of", &rules, "--max-depth", "2"]);
    assert_eq!((code(&out), stdout(&out).lines().next()), (1, Some("RESULT inconclusive")));
}

#[test]
fn conflicting_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (model, rules, path) = setup(dir.path());
    let out = gdlz(&["check", "--model", &model, "--path", &path, "--formula", "initial", "--stage", "0", "--global"]);
    assert_eq!(code(&out), 2);
    let out = gdlz(&["run", "--model", &model, "--actions", &path, "--enumerate"]);
    assert_eq!(code(&out), 2);
    let out = gdlz(&["check", "--model", &model, "--is-model-of", &rules, "--path", &path]);
    assert_eq!(code(&out), 2);
}

#[test]
fn path_translation_writes_a_checkable_game() {
    let dir = tempfile::tempdir().unwrap();
    let (model, _, path) = setup(dir.path());
    let out_dir = dir.path().join("gdl");
    let o = out_dir.to_str().unwrap();
    let out = gdlz(&[
        "translate", "--mode", "path", "--model", &model, "--path", &path, "--formula", "heap_1 > heap_2", "--out-dir", o,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let gdl_model = fs::read_to_string(out_dir.join("gdl.model")).unwrap();
    assert!(gdl_model.contains("TERMINAL p2_0_0\n"));
    assert!(!gdl_model.contains("VARS"));
    assert_eq!(fs::read_to_string(out_dir.join("gdl.rules")).unwrap(), "bigger(5,3)\n");
    let sidecar = fs::read_to_string(out_dir.join("gdl.actions")).unwrap();
    assert!(sidecar.contains("reduce__Player1__1_5\tPlayer1\treduce\t1,5\n"));
    let (m, p) = (format!("{o}/gdl.model"), format!("{o}/gdl.path"));
    let check = gdlz(&["check", "--model", &m, "--path", &p, "--formula", "bigger(5,3) and heap_1(5)", "--stage", "0"]);
    assert_eq!(stdout(&check).lines().next(), Some("RESULT true"));
}

#[test]
fn complete_translation_and_its_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    gdlz(&["nim", "--heaps", "2,2", "--out-dir", d]);
    let model = format!("{d}/nim.model");
    let out = gdlz(&["translate", "--mode", "complete", "--model", &model, "--zmin", "0", "--zmax", "2", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("actions: 10"));
    let out = gdlz(&["translate", "--mode", "complete", "--model", &model, "--zmin", "0", "--zmax", "1", "--out-dir", d]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not finite"));
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (model, rules, path) = setup(dir.path());
    let vals = dir.path().join("vals.rules");
    fs::write(&vals, "vals(0,0)\n").unwrap();
    let out = gdlz(&["analyze", "--rules", vals.to_str().unwrap(), "--mode", "path", "--model", &model, "--path", &path, "--kv"]);
    let text = stdout(&out);
    assert!(text.contains("source_count=1\n") && text.contains("translated_count=2\n") && text.contains("match=true\n"));
    let empty = dir.path().join("empty.rules");
    fs::write(&empty, "").unwrap();
    let out = gdlz(&["analyze", "--rules", empty.to_str().unwrap(), "--mode", "path", "--model", &model, "--path", &path, "--kv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("source_count=0\n"));
    let out = gdlz(&["analyze", "--rules", &rules, "--mode", "path", "--model", &model, "--path", &path]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("match  true"));
    let out = gdlz(&["analyze", "--rules", vals.to_str().unwrap(), "--mode", "complete", "--vars", "heap_1,heap_2", "--zmin", "0", "--zmax", "2", "--kv"]);
    assert!(stdout(&out).contains("estimate_match=true\n"), "{}", stdout(&out));
    let wide = ["analyze", "--rules", vals.to_str().unwrap(), "--mode", "complete", "--vars", "x", "--zmin", "0", "--zmax", "20000"];
    assert!(String::from_utf8_lossy(&gdlz(&wide).stderr).contains("warning"));
}
