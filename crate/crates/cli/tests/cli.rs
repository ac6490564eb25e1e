use std::path::PathBuf;
use std::process::{Command, Output};

fn fictio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fictio"))
        .args(args)
        .env_remove("FICTIO_WINDOW")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    fictio(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = fictio(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

const GOLDEN: [(&str, &[&str]); 6] = [
    ("deriv.json", &["--json", "deriv", "x^2", "--at", "3"]),
    ("tangent.json", &["--json", "tangent", "x^3", "--at", "2"]),
    ("tlh.json", &["--json", "tlh", "eps + eps^2"]),
    ("axioms.json", &["--json", "--seed", "42", "axioms", "lc-positive"]),
    ("compare.json", &["--json", "--seed", "42", "compare", "x^2 + x^3", "--at", "0"]),
    ("eval.json", &["--json", "eval", "x^2 + 1/x", "--at", "2 + eps", "--emit-ast"]),
];

#[test]
fn golden_files_are_byte_identical() {
    for (file, args) in GOLDEN {
        assert_eq!(stdout(args), golden(file), "{file}");
        assert_eq!(stdout(args), stdout(args), "{file} is not deterministic");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["deriv", "x^2", "--at", "3"]), 0);
    assert_eq!(code(&["deriv", "x^^2", "--at", "3"]), 2);
    assert_eq!(code(&["deriv", "x^2", "--at", "three"]), 2);
    assert_eq!(code(&["deriv", "1/x", "--at", "0"]), 3);
    assert_eq!(code(&["deriv", "sqrt(x)", "--at", "0", "--mode", "float"]), 3);
    assert_eq!(code(&["deriv", "x^2", "--at", "1", "--order", "16"]), 3);
    assert_eq!(code(&["tlh", "eps +"]), 2);
    assert_eq!(code(&["tlh", "eps", "--scale", "0"]), 3);
    assert_eq!(code(&["axioms", "reals"]), 2);
    assert_eq!(code(&["axioms", "horn"]), 0);
    assert_eq!(code(&["compare", "x^3", "--at", "2"]), 0);
    assert_eq!(code(&["compare", "sin(x)", "--at", "0"]), 3);
    assert_eq!(code(&["compare", "1/x", "--at", "0"]), 3);
    assert_eq!(code(&["eval", "1/(x - x)", "--at", "eps"]), 3);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["deriv", "x"]), 2);
}

#[test]
fn parse_errors_carry_a_position() {
    let err = String::from_utf8(fictio(&["deriv", "x^^2", "--at", "3"]).stderr).unwrap();
    assert!(err.contains("at byte 2"), "{err}");
}

#[test]
fn text_reports() {
    let out = stdout(&["deriv", "x^2", "--at", "3"]);
    assert!(out.contains("raw dy/dx   = 6 + eps"));
    assert!(out.contains("derivative  = 6"));
    let out = stdout(&["tlh", "5"]);
    assert!(out.contains("kept        = 5") && out.contains("discarded   = none"));
    assert!(stdout(&["tlh", "0"]).contains("kept        = 0"));
    let out = stdout(&["compare", "sin(x)", "--at", "0", "--mode", "float"]);
    assert!(out.contains("WithinTolerance"), "{out}");
    let out = stdout(&["compare", "x^2 + x^3", "--at", "0"]);
    assert!(out.contains("ExactMatch") && out.contains("discarded  = eps + eps^2"), "{out}");
    let out = stdout(&["axioms", "horn"]);
    assert!(out.contains("counterexample ((0,1), (1,0))"), "{out}");
    assert!(stdout(&["tangent", "x^2", "--at", "1"]).contains("y           = 2*x - 1"));
}

#[test]
fn axioms_report_each_verdict() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--json", "axioms", "rationals"])).unwrap();
    let verdicts: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap_or("?")).collect();
    assert_eq!(verdicts[..4], ["Holds"; 4]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--json", "axioms", "horn"])).unwrap();
    assert_eq!(v["reports"][0]["counterexamples"][0]["elements"], serde_json::json!(["(0,1)", "(1,0)"]));
    assert_eq!(v["reports"][4]["verdict"], serde_json::json!({"Unknown": 100000}));
}

#[test]
fn window_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fictio"))
        .args(["--json", "eval", "1/x", "--at", "1 + eps"])
        .env("FICTIO_WINDOW", "4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "1 - eps + eps^2 - eps^3");
    assert_eq!(v["horizon"], 4);
    let flag = stdout(&["--json", "--window", "2", "eval", "1/x", "--at", "1 + eps"]);
    assert!(flag.contains("\"1 - eps\""), "{flag}");
}

#[test]
fn json_errors() {
    let out = fictio(&["--json", "deriv", "1/x", "--at", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "evaluation");
}
