use std::process::Command;

use padic_mackey::expr::random_expr;
use padic_mackey::{parse, run};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn cli(args: &[&str]) -> padic_mackey::Outcome {
    run(std::iter::once("padic-mackey").chain(args.iter().copied()))
}

fn cli_json(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn hom_of_unit() {
    assert_eq!(
        cli_json(&["hom", "U", "U", "--json"]),
        json!({"stable": 1, "dev": {"prefix": [], "tail": 1}, "free": {"prefix": [], "tail": 0}})
    );
    let text = cli(&["hom", "U", "U"]);
    assert_eq!(text.stdout, "stable: 1\ndev: (tail 1)\nfree: (tail 0)\n");
}

#[test]
fn hom_into_an_orbit_generator() {
    let v = cli_json(&["hom", "U", "A(2)", "--p", "3", "--json"]);
    assert_eq!(v["stable"], 1);
    assert_eq!(v["free"]["tail"], 0);
}

#[test]
fn ext_from_l0_to_unit() {
    assert_eq!(cli_json(&["ext", "L(0)", "U", "--json"]), json!({"W_dim": 1, "V_dim": 1, "zero": false}));
    assert_eq!(cli_json(&["ext", "A(1)", "L(2)", "--json"])["zero"], true);
}

#[test]
fn maps_between_orbits() {
    let v = cli_json(&["maps", "A(1)", "A(2)", "--json"]);
    assert_eq!(v["zero"], false);
    assert!(v["ext"].as_array().unwrap().is_empty());
    let v = cli_json(&["maps", "A(1)", "A(2)", "-d", "-1", "--json"]);
    assert_eq!(v["zero"], true);
    let v = cli_json(&["maps", "L(0)", "U[-1]", "--degree", "-2", "--json"]);
    assert_eq!(v["ext"].as_array().unwrap().len(), 1);
}

#[test]
fn tensor_and_iso() {
    let v = cli_json(&["iso", "U * (A(1) + E(2))", "A(1) + E(2)", "--json"]);
    assert_eq!(v["isomorphic"], true);
    assert!(v["witness"].is_object());
    let v = cli_json(&["iso", "A(1)", "E(1)", "--json"]);
    assert_eq!(v["isomorphic"], false);
    assert!(v["witness"].is_null());
    let v = cli_json(&["tensor", "A(1)", "A(1)", "--json"]);
    assert_eq!(v["stab"], 1);
    assert_eq!(v["template"].as_array().unwrap().len(), 4);
}

#[test]
fn mackey_and_tomdieck_agree() {
    let rows = cli_json(&["mackey", "A(2)", "--json"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let td = cli_json(&["tomdieck", "1", "2", "--json"]);
    assert_eq!(td["per_j_dims"], json!([0, 2, 2, 2, 2]));
    assert_eq!(rows[1]["component_dims"], json!({"prefix": [0, 0], "tail": 2}));
    let rows = cli_json(&["mackey", "A(2)", "--kmax", "1", "--json"]);
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn burnside_command() {
    let v = cli_json(&["burnside", "2", "--json"]);
    assert_eq!(v["marks"], json!([["1", "1", "1"], ["0", "2", "2"], ["0", "0", "4"]]));
    assert_eq!(v["idempotents"].as_array().unwrap().len(), 2);
}

#[test]
fn table_has_eleven_matching_rows() {
    let v = cli_json(&["table", "--p", "2", "--json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r["matches"] == true));
    assert_eq!(cli(&["table", "--n", "2", "--m", "2"]).code, 1);
}

#[test]
fn check_passes() {
    let out = cli(&["check", "--seed", "3", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let suites: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(suites.as_array().unwrap().iter().all(|s| s["failed"] == 0));
}

#[test]
fn errors_exit_with_one() {
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, 1);
    let out = cli(&["hom", "U", "U", "--p", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not a prime"));
    let out = cli(&["hom", "A(", "U"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("offset 2"), "{}", out.stderr);
    assert_eq!(cli(&["tomdieck", "1", "1", "--jmax", "9"]).code, 1);
    assert_eq!(cli(&["tomdieck", "1", "1", "--p", "7"]).code, 1);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_padic-mackey");
    let out = Command::new(bin).args(["hom", "U", "U", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stable"], 1);
    let out = Command::new(bin).args(["nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).env("PADIC_MACKEY_KMAX", "2").args(["mackey", "U", "--json"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn unicode_minus_in_shifts() {
    assert_eq!(parse("U[−1]").unwrap(), parse("U[-1]").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn printed_expressions_parse_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 3, 3);
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn object_json_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obj = random_expr(&mut rng, 2, 2).eval_object(2).unwrap();
        let text = serde_json::to_string(&obj).unwrap();
        let back: mackey_core::amodel::RigidObject = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, obj);
    }
}
