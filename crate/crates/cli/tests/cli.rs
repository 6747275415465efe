use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn mirela(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirela"))
        .args(args)
        .env_remove("MIRELA_STATE_CAP")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn parse_prints_explicit_targets() {
    let ex1 = model("ex1.mirela");
    let o = mirela(&["parse", ex1.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("Ex_1:\n"));
    assert!(text.contains("  S1 = Periodic(50,75)[75,100] -> (F1);\n"), "{text}");
    assert!(text.contains("  S2 = Periodic(200,300)[350,400] -> (F2,F1);\n"), "{text}");
}

#[test]
fn classify_json_has_example_two_verdicts() {
    let ex2 = model("ex2.mirela");
    let o = mirela(&["classify", ex2.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["scale"], 25);
    let status = |c: &str, l: &str| {
        report["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|v| v["component"] == c && v["primed"] == l)
            .map(|v| v["status"].as_str().unwrap().to_string())
            .unwrap()
    };
    for (c, l) in [("S2", "s2'"), ("S3", "s2'"), ("F2", "s2'"), ("B", "s1'")] {
        assert_eq!(status(c, l), "D", "{c}.{l}");
    }
    assert_eq!(status("S2", "s3'"), "S");
    assert_eq!(status("B", "s4'"), "SAFE");
    assert_eq!(status("R", "s0'"), "SAFE");
    assert_eq!(report["skipped"].as_array().unwrap().len(), 4);
}

#[test]
fn emit_writes_model_and_properties() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = model("ex2.mirela");
    let o = mirela(&["emit", ex2.to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let prism = std::fs::read_to_string(dir.path().join("ex2.prism")).unwrap();
    let props = std::fs::read_to_string(dir.path().join("ex2.props")).unwrap();
    assert!(prism.contains("\nmdp\n"));
    assert_eq!(props.lines().count(), 42);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn syntax_error_exits_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mirela");
    std::fs::write(&bad, "X:\n  S = Periodic(1,2)[3,4]\n  F = First(S[1,2]).\n").unwrap();
    let o = mirela(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.mirela:3:"), "{err}");

    let o = mirela(&["parse", dir.path().join("missing.mirela").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn state_cap_exits_2() {
    let ex1 = model("ex1.mirela");
    let o = mirela(&["classify", ex1.to_str().unwrap(), "--state-cap", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap of 1000 transitions"), "{}", stderr(&o));
}

#[test]
fn aperiodic_sensor_and_strict_reading() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ap.mirela");
    std::fs::write(&spec, "Ap: S = Aperiodic(4); F = First(S[2,4]); M = Memory(F[2,4]); R = Rendering(4,8)(M[2,4]).").unwrap();
    let o = mirela(&["classify", spec.to_str().unwrap(), "--invariants", "strict"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("strict invariants"), "{out}");
    assert!(out.contains("S/U"), "{out}");
    assert!(out.contains("S.s0: an unbounded waiting of an aperiodic sensor"), "{out}");
}

#[test]
fn elaborate_formats() {
    let ex1 = model("ex1.mirela");
    let o = mirela(&["elaborate", ex1.to_str().unwrap(), "--format", "dot"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph"));
    let o = mirela(&["transform", ex1.to_str().unwrap(), "--format", "json"]);
    let net: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(net["automata"].as_array().unwrap().len(), 8);
}
