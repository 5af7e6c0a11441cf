//! The demo entry points run natively; these check their JSON answers.

use defcohom_web::{check, fixture, resonances, verify_covering};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("entry points return JSON")
}

#[test]
fn check_reports_pass_and_failures() {
    let v = parse(check(&fixture("h.alg")));
    assert_eq!(v["ok"], true);
    assert_eq!(v["pass"], true);
    let v = parse(check(&fixture("raw_bf.alg")));
    assert_eq!(v["pass"], false);
    assert_eq!(v["failing"][0]["symbol"], "theta0");
}

#[test]
fn resonance_table_of_the_five_dimensional_example() {
    let v = parse(resonances(&fixture("h.alg"), 2, false, 0));
    assert_eq!(v["generic_dimension"], 0);
    let got: Vec<(String, u64)> = v["resonances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["lambda"].as_str().unwrap().to_string(), r["dimension"].as_u64().unwrap()))
        .collect();
    let want: Vec<(String, u64)> = [("-3", 1), ("-2", 1), ("-1", 3), ("1", 2)].iter().map(|(l, d)| (l.to_string(), *d)).collect();
    assert_eq!(got, want);
}

#[test]
fn coverings_pass_and_the_broken_one_fails() {
    let v = parse(verify_covering(&fixture("bf_covering.pde")));
    assert_eq!(v["pass"], true);
    let v = parse(verify_covering(&fixture("broken_pkz_covering.pde")));
    assert_eq!(v["pass"], false);
}

#[test]
fn errors_come_back_as_json() {
    let v = parse(check("algebra x\nform a\nd a = b\n"));
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("line 3"));
    let v = parse(verify_covering("independent t x\ndependent u\n"));
    assert_eq!(v["ok"], false);
    assert_eq!(fixture("missing.alg"), "");
}
