use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_tautring")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn nondeg_anchor() {
    let (code, v) = run(&["nondeg", "--g", "4", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["nonzero"], true);
    assert_eq!(v["S"], "-201/8");
}

#[test]
fn intersect_both() {
    let (code, v) = run(&["intersect", "--g", "1", "--exps", "1", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["ppz"], "1/24");
    assert_eq!(v["dvv"], "1/24");
    assert_eq!(v["equal"], true);
}

#[test]
fn dims_bound() {
    let (code, v) = run(&["dims", "--d", "1", "--g", "3", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({ "bound": 2 }));
}

#[test]
fn half_integer_fields() {
    let (code, v) = run(&["relation", "--g", "3", "--n", "2", "--degree", "4", "--fields", "9/2,0,3/2,-1/2", "--x", "1"]);
    assert_eq!(code, 0);
    let terms = v["class"]["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["coeff"] == "189/64" && t["kappa"] == serde_json::json!([1])));
}

#[test]
fn socle_and_vanish_verify() {
    let (code, v) = run(&["socle", "--g", "3", "--n", "2", "--psi", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    let (code, v) = run(&["vanish", "--g", "2", "--n", "1", "--kappa", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["residual"]["terms"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    let (code, v) = run(&["nondeg", "--g", "3", "--n", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "invalid_input");
    let (code, _) = run(&["nondeg", "--g", "x"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["bogus"]);
    assert_eq!(code, 2);
}
