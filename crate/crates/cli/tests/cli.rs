use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperprover"))
        .args(args)
        .env_remove("HYPERPROVER_TIMEOUT_SECS")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).expect("utf-8")
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/distributivity.proof")
}

#[test]
fn prove_exit_codes() {
    assert_eq!(code(&["prove", "--logic", "mtl", "(p->q) \\/ (q->p)"]), 0);
    assert_eq!(code(&["prove", "--logic", "mtl", "p -> p*p"]), 1);
    assert_eq!(code(&["prove", "--logic", "hflec", "p -> p*p"]), 0);
    assert_eq!(code(&["prove", "--logic", "hflec", "--engine", "backward", "p -> (q -> p)"]), 1);
}

#[test]
fn check_fixture() {
    let path = fixture();
    assert_eq!(code(&["check", "--logic", "hfle", path.to_str().unwrap()]), 0);
}

#[test]
fn check_rejects_altered_proof() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture()).unwrap().replace("=> p | r => r [id]", "=> p | r => q [id]");
    let path = dir.path().join("bad.proof");
    fs::write(&path, text).unwrap();
    let out = run(&["check", "--logic", "hfle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("REJECT node /0/1/0"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["prove", "p ->"]), 3);
    assert_eq!(code(&["prove", "--logic", "nonsense", "p"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    // both (lw) and (c): the engine must be named
    assert_eq!(code(&["prove", "--logic", "hflelw+c", "p -> p"]), 3);
    assert_eq!(code(&["prove", "--logic", "hfle", "p -> p"]), 3);
    assert_eq!(code(&["prove", "--logic", "hflelw+c", "--engine", "forward", "p -> p"]), 0);
    assert_eq!(code(&["check", "/definitely/not/here.proof"]), 3);
}

#[test]
fn timeout_is_indeterminate() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperprover"))
        .args(["prove", "--logic", "hflelw+com", "(p /\\ q -> r) -> (p -> r) \\/ (q -> r)"])
        .env("HYPERPROVER_TIMEOUT_SECS", "0.2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn proof_output_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    for (logic, name) in [("mtl", "mtl.proof"), ("hflec", "c.json")] {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        assert_eq!(code(&["prove", "--logic", logic, "--proof-out", p, "p /\\ q -> q /\\ p"]), 0);
        assert_eq!(code(&["check", "--logic", logic, p]), 0);
    }
}

#[test]
fn machine_records() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.jsonl");
    let seq = dir.path().join("seq.jsonl");
    let args = [
        "prove",
        "--logic",
        "hflelw",
        "--stats",
        stats.to_str().unwrap(),
        "--record-bad-sequence",
        seq.to_str().unwrap(),
        "p * q -> q * p",
    ];
    assert_eq!(code(&args), 0);
    let first = fs::read_to_string(&stats).unwrap();
    let recorded = fs::read_to_string(&seq).unwrap();
    for line in first.lines().chain(recorded.lines()) {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
    // identical queries give identical records
    assert_eq!(code(&args), 0);
    assert_eq!(fs::read_to_string(&stats).unwrap(), first);
    assert_eq!(fs::read_to_string(&seq).unwrap(), recorded);
}

#[test]
fn deterministic_reports() {
    for args in [
        &["prove", "--logic", "mtl", "(p->q) \\/ (q->p)"][..],
        &["prove", "--logic", "hflec+lw+rw", "p /\\ (p -> q) -> q * p"],
        &["saturate", "--logic", "hflelw", "p -> q"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}

#[test]
fn rules_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex.rules");
    fs::write(&path, "rule ex\npremise: H | X, X => P\nconclusion: H | X => P\n").unwrap();
    let out = stdout(&["rules", "--logic", "hflelw", "--rules-file", path.to_str().unwrap()]);
    assert!(out.contains("rule ex"));
    assert_eq!(code(&["rules", "--rule", "knot:0,1"]), 3);
}

#[test]
fn oracle_and_encode() {
    let out = run(&["oracle", "--chain", "lukasiewicz", "--size", "3", "p -> p*p"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "value 1/2\ncountermodel p=1/2\n");
    assert_eq!(code(&["oracle", "--chain", "godel", "p -> p*p"]), 0);
    assert_eq!(stdout(&["encode", "p => p | p, p =>"]), "omega {p}\n(empty): {(2)}\np: {(1)}\n");
}
