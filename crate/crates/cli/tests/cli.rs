use std::fs;

use assert_cmd::Command;
use serde_json::Value;

fn kmgc() -> Command {
    Command::cargo_bin("kmgc").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = kmgc()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&stdout_of(&a)).unwrap()
}

fn class_elements(v: &Value, class: &str) -> Vec<String> {
    v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["class"] == class)
        .unwrap()["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn grade_horizontal_z2() {
    let v = json_of(&["grade", "--algebra", "A2", "--efo", "0,1,1"]);
    assert_eq!(v["group"], "Z2");
    assert_eq!(
        class_elements(&v, "0"),
        ["k", "E_{mδ}", "E_{α1+α2+mδ}", "E_{-(α1+α2)+mδ}"]
    );
    assert_eq!(
        class_elements(&v, "1"),
        ["E_{α1+mδ}", "E_{α2+mδ}", "E_{-α1+mδ}", "E_{-α2+mδ}"]
    );
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn grade_vertical_z3() {
    let v = json_of(&["grade", "--algebra", "A2", "--vertical", "3"]);
    for (class, r) in [("0", "3mδ"), ("1", "(3m+1)δ"), ("2", "(3m+2)δ")] {
        let e = class_elements(&v, class);
        assert_eq!(e.len(), if class == "0" { 8 } else { 7 });
        assert!(
            e.iter()
                .filter(|x| *x != "k")
                .all(|x| x.ends_with(&format!("{r}}}"))),
            "{e:?}"
        );
    }
}

#[test]
fn grade_mixed_z2z2() {
    let v = json_of(&[
        "grade",
        "--algebra",
        "A2",
        "--efo",
        "0,1,1",
        "--vertical",
        "2",
    ]);
    assert_eq!(v["group"], "Z2xZ2");
    assert_eq!(
        class_elements(&v, "00"),
        ["k", "E_{2mδ}", "E_{α1+α2+2mδ}", "E_{-(α1+α2)+2mδ}"]
    );
    assert_eq!(class_elements(&v, "11").len(), 4);
    assert!(class_elements(&v, "11")
        .iter()
        .all(|x| x.ends_with("(2m+1)δ}")));
}

#[test]
fn solve_examples() {
    let v = json_of(&["solve", "--group", "Z2", "--generic"]);
    assert_eq!(v.as_array().unwrap().len(), 5);
    let text = stdout_of(&["solve", "--group", "Z2", "--mask", "00=irrelevant"]);
    assert!(
        text.contains("(∅,1,0)") && text.contains("(∅,0,1)"),
        "{text}"
    );
    let text = stdout_of(&["solve", "--group", "Z3"]);
    assert!(text.contains("15 ε solutions"), "{text}");
}

#[test]
fn solution_file_feeds_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z2.json");
    let p = path.to_str().unwrap();
    kmgc()
        .args(["solve", "--algebra", "A2", "--efo", "0,1,1", "--out", p])
        .assert()
        .success();
    let tables: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let n = tables.as_array().unwrap().len();
    for i in 0..n {
        let v = json_of(&[
            "contract",
            "--solutions",
            p,
            "--index",
            &i.to_string(),
            "--check-jacobi",
            "-W",
            "2",
        ]);
        assert_eq!(v["jacobi"]["report"]["passed"], true);
        assert_eq!(v["table"]["epsilon"], tables[i]["epsilon"]);
    }
    kmgc()
        .args(["contract", "--solutions", p, "--index", &n.to_string()])
        .assert()
        .code(1);
}

#[test]
fn contract_with_jacobi() {
    let text = stdout_of(&[
        "contract",
        "--epsilon",
        "1,1,0",
        "--check-jacobi",
        "-W",
        "3",
    ]);
    assert!(text.contains("Jacobi W=3: pass"), "{text}");
    assert!(text.contains("semidirect"), "{text}");
    // Not a solution of the ε equations.
    kmgc()
        .args(["contract", "--epsilon", "1,0,1"])
        .assert()
        .code(1);
}

#[test]
fn contract_with_kappa() {
    let v = json_of(&["contract", "--epsilon", "1,0,0", "--kappa", "2,0,5"]);
    assert_eq!(
        v["brackets"]["(0,0)"],
        "[a,b]⊗t^{m+n} + 2·m k B(a,b) δ_{m+n,0}"
    );
    assert_eq!(v["brackets"]["(0,1)"], "0");
    assert_eq!(v["brackets"]["(1,1)"], "5·m k B(a,b) δ_{m+n,0}");
    kmgc()
        .args(["contract", "--epsilon", "1,0,0", "--kappa", "1,1,0"])
        .assert()
        .code(1);
}

#[test]
fn generators_of_a1() {
    let v = json_of(&[
        "generators",
        "--algebra",
        "A1",
        "--vertical",
        "2",
        "--epsilon",
        "1,1,0",
        "-W",
        "5",
    ]);
    let labels: Vec<&str> = v["display"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(labels, ["E_{α1}", "E_{-α1+δ}", "E_{-α1+2δ}"]);
    // A three-entry EFO does not fit rank 1.
    kmgc()
        .args([
            "generators",
            "--algebra",
            "A1",
            "--efo",
            "0,1,1",
            "--epsilon",
            "1,1,0",
            "-W",
            "5",
        ])
        .assert()
        .code(1);
}

#[test]
fn generators_inconclusive_window() {
    kmgc()
        .args([
            "generators",
            "--algebra",
            "A1",
            "--vertical",
            "2",
            "--epsilon",
            "1,1,0",
            "-W",
            "2",
        ])
        .assert()
        .code(3);
}

#[test]
fn repgrade_principal() {
    let v = json_of(&[
        "repgrade",
        "--algebra",
        "A2",
        "--hw",
        "1,0,0",
        "--efo",
        "1,1,1",
        "--depth",
        "10",
    ]);
    assert_eq!(v["verification"]["passed"], true);
    let rows = v["rows"].as_array().unwrap();
    let class_of = |labels: [i64; 3]| {
        rows.iter()
            .find(|r| r["labels"] == serde_json::json!(labels))
            .map(|r| r["class"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(class_of([4, -3, 0]), "0");
    assert_eq!(class_of([4, 0, -3]), "0");
    assert_eq!(class_of([0, 2, -1]), "1");
    assert_eq!(class_of([-1, 1, 1]), "2");
    kmgc()
        .args(["repgrade", "--algebra", "A2", "--efo", "1,1,1"])
        .assert()
        .code(1);
    kmgc()
        .args([
            "repgrade",
            "--algebra",
            "A2",
            "--hw",
            "1,0,0",
            "--depth",
            "40",
        ])
        .assert()
        .code(1);
}

#[test]
fn job_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    fs::write(
        &path,
        r#"{"command": "generators", "algebra": "A1",
            "grading": {"layers": [{"kind": "vertical", "N": 2}]},
            "epsilon": [1, 1, 0], "window": 2}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    kmgc().args(["generators", "--job", p]).assert().code(3);
    kmgc()
        .args(["generators", "--job", p, "-W", "5"])
        .assert()
        .success();
    kmgc().args(["grade", "--job", p]).assert().code(1);

    fs::write(&path, r#"{"algebra": "A2", "windw": 3}"#).unwrap();
    kmgc().args(["grade", "--job", p]).assert().code(1);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["solve", "--group", "Z2xZ2", "--gamma", "--json"],
        vec![
            "repgrade", "--hw", "1,0,0", "--efo", "0,1,0", "--depth", "6", "--json",
        ],
        vec!["contract", "--epsilon", "0,0,1", "--check-jacobi", "--json"],
    ] {
        assert_eq!(stdout_of(&args), stdout_of(&args));
    }
}

#[test]
fn bad_input_exit_codes() {
    kmgc().args(["grade", "--algebra", "Q7"]).assert().code(1);
    kmgc().args(["grade", "--bogus"]).assert().code(1);
    kmgc().args(["solve", "--group", "Z17"]).assert().code(2);
    kmgc().args(["grade", "--hw", "1,0,0"]).assert().code(1);
    kmgc().arg("--help").assert().success();
}

/// The published schema and the accepted job fields stay in step.
#[test]
fn job_schema_lists_every_field() {
    let schema: Value = serde_json::from_str(include_str!("../schemas/job.schema.json")).unwrap();
    let props: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    for p in &props {
        // A field outside the schema is rejected while parsing; one inside is accepted
        // and then refused by `grade` unless grade reads it.
        fs::write(&path, format!(r#"{{"{p}": null}}"#)).unwrap();
        let out = kmgc()
            .args(["grade", "--job", path.to_str().unwrap()])
            .output()
            .unwrap();
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.contains("unknown field"), "{p}: {err}");
    }
    fs::write(&path, r#"{"not_a_field": 1}"#).unwrap();
    let out = kmgc()
        .args(["grade", "--job", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}
