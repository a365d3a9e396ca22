use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.rowg"))
}

fn rowg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rowg"))
        .args(args)
        .env_remove("ROWG_FUEL")
        .output()
        .expect("rowg runs")
}

fn run_file(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = corpus(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    rowg(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn exit_codes() {
    let cases = [
        ("record_projection", 0),
        ("type_error", 1),
        ("record_projection_blame", 2),
        ("parse_error", 3),
        ("loop", 4),
    ];
    for (name, code) in cases {
        let o = run_file("run", name, &["--fuel", "500"]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
    }
}

#[test]
fn value_and_blame_output() {
    let o = run_file("run", "record_projection", &[]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = run_file("run", "record_projection_blame", &[]);
    assert_eq!(stdout(&o).trim(), "blame p1");
}

#[test]
fn errors_carry_positions() {
    let o = run_file("check", "parse_error", &[]);
    let err = stderr(&o);
    assert!(err.contains("parse_error.rowg:"), "{err}");
    assert!(err.contains("parse error"), "{err}");
    let o = run_file("check", "type_error", &[]);
    assert!(stderr(&o).contains("type error"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = rowg(&["run", "/nonexistent/x.rowg"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fuel_from_environment() {
    let path = corpus("loop");
    let o = Command::new(env!("CARGO_BIN_EXE_rowg"))
        .args(["run", path.to_str().unwrap()])
        .env("ROWG_FUEL", "37")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stdout(&o).trim(), "fuel exhausted after 37 steps");
    // the flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_rowg"))
        .args(["run", path.to_str().unwrap(), "--fuel", "5"])
        .env("ROWG_FUEL", "37")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "fuel exhausted after 5 steps");
}

#[test]
fn json_trace_lines() {
    let o = run_file("trace", "record_injection", &["--json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (last, steps) = lines.split_last().unwrap();
    assert_eq!(steps.len(), 4);
    for (i, s) in steps.iter().enumerate() {
        assert_eq!(s["step"], i as u64 + 1);
        assert!(s["rule"].is_string());
        assert!(s["store"].is_array());
        assert!(s["term"].is_string());
    }
    assert_eq!(last["outcome"], "value");
    assert_eq!(last["steps"], 4);
}

#[test]
fn trace_matches_run_trace() {
    for name in ["variant_projection_lift", "id_int", "row_poly"] {
        let a = run_file("trace", name, &[]);
        let b = run_file("run", name, &["--trace"]);
        assert_eq!(stdout(&a), stdout(&b), "{name}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn sealing_records_names() {
    let o = run_file("trace", "id", &["--json"]);
    let grew = stdout(&o)
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .any(|v| v["store"].as_array().is_some_and(|s| !s.is_empty()));
    assert!(grew, "{}", stdout(&o));
}

#[test]
fn primed_conlift_changes_the_outcome() {
    let o = run_file("run", "conlift_dyn", &[]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_file("run", "conlift_dyn", &["--primed-conlift"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("blame"));
}

#[test]
fn static_mode() {
    let o = run_file("run", "record_projection", &["--mode", "static"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run_file("check", "row_poly", &["--mode", "static"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "Int");
    let o = run_file("run", "row_poly", &["--mode", "static"]);
    assert_eq!(stdout(&o).trim(), "42");
}

#[test]
fn translate_prints_casts() {
    let o = run_file("translate", "record_injection", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("=p"), "{}", stdout(&o));
}

#[test]
fn props_pass() {
    let o = rowg(&["props", "--depth", "1", "--programs", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn props_catch_the_mutant() {
    let o = rowg(&["props", "--depth", "2", "--programs", "5", "--mutant", "eq-swap"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let fail = out.lines().find(|l| l.starts_with("FAIL")).expect("a failing suite");
    assert!(fail.contains("equiv-oracle"), "{fail}");
    assert!(fail.contains("l1:Int; l1:Bool"), "{fail}");
}
