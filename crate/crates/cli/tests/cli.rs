use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chabauty"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_doc(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn qk_counts() {
    for (p, k, want) in [("7", "3", "9"), ("2", "2", "8"), ("3", "2", "4")] {
        let o = run(&["qk", "--p", p, "--k", k]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn sl2_preset_limit() {
    let o = run(&["limit", "--preset", "sl2", "--p", "5", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["basis"], serde_json::json!(["[0, 1; 0, 0]"]));
}

#[test]
fn family_file_limit() {
    let f = temp_doc(r#"{"kind": "family", "p": 5, "precision": 32, "base": "cartan", "conjugator": [["1", "0"], ["0", "1"]]}"#);
    let o = run(&["limit", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("[1, 0; 0, -1]"));
}

#[test]
fn failed_check_exits_with_one() {
    let f = temp_doc(
        r#"{"kind": "family", "p": 5, "precision": 32,
            "base": [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]],
            "conjugator": [["1", "0"], ["0", "1"]]}"#,
    );
    let o = run(&["limit", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("abelian        FAILED"));
}

#[test]
fn parse_errors_exit_with_two_and_locate_the_cell() {
    let f = temp_doc("{\"kind\": \"family\", \"p\": 5, \"precision\": 32, \"base\": \"cartan\",\n \"conjugator\": [[\"1\", \"s^\"], [\"0\", \"1\"]]}");
    let o = run(&["limit", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["qk", "--p", "9", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn sl3_table_at_seven() {
    let o = run(&["tables", "--n", "3", "--p", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("13 classes verified"));
}

#[test]
fn classify_and_tree() {
    let o = run(&["classify", "--p", "5", "--matrix", r#"[["5","0","0"],["0","1","0"],["0","0","1/5"]]"#]);
    assert!(stdout(&o).starts_with("hyperbolic"));
    let o = run(&["tree", "translation-length", "--p", "5", "--matrix", r#"[["5","0"],["0","1/5"]]"#]);
    assert_eq!(stdout(&o).lines().next(), Some("2"));
    let o = run(&["tree", "stabilizer", "--p", "5", "--matrix", r#"[["1","1/5"],["0","1"]]"#, "--vertex", "[p^0, 0; 0, p^1]"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn matrix_documents() {
    let f = temp_doc(r#"{"kind": "matrix", "p": 5, "precision": 32, "rows": [["1", "3"], ["0", "-1"]]}"#);
    let o = run(&["witness", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("hyperbolic: true"));
}

#[test]
fn output_is_deterministic() {
    let args = ["invariant", "--p", "5", "--first", "sl4-N4:1", "--second", "sl4-N4:p^8", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdict"], "conjugate");
    assert_eq!(v["conjugator_verified"], true);
}
