use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_selfdual-forge");

const HAMMING: &str = "8 4\n11110000\n00111100\n00001111\n01010101\n";
const HAMMING_PERMUTED: &str = "8 4\n10010011\n11000101\n01101100\n00001111\n";

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn mindist_of_extended_hamming_is_four() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "h8.gm2", HAMMING);
    let (code, out) = run(&["mindist", &f]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["min_distance"], 4);
    assert_eq!(v["verdict"], "exact");
    let (_, out) = run(&["mindist", &f, "--at-least", "5"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "below");
    assert_eq!(v["witness_weight"], 4);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "h8.gm2", HAMMING);
    for args in [vec!["wdist", f.as_str()], vec!["aut", f.as_str()], vec!["ring", "selftest"], vec!["m2", "generate", "--seed", "3", "--min-distance", "8"]] {
        let (_, stdout) = run(&args);
        let target = dir.path().join("out.txt");
        let mut with_output = args.clone();
        with_output.extend(["--output", target.to_str().unwrap()]);
        let (code, quiet) = run(&with_output);
        assert_eq!(code, 0);
        assert!(quiet.is_empty());
        assert_eq!(fs::read_to_string(&target).unwrap(), stdout, "{args:?}");
    }
}

#[test]
fn weight_distribution_and_automorphisms() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "h8.gm2", HAMMING);
    let (_, out) = run(&["wdist", &f]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["distribution"]["counts"], serde_json::json!([1, 0, 0, 0, 14, 0, 0, 0, 1]));
    let (_, out) = run(&["aut", &f]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], "1344");
}

#[test]
fn equivalence_gives_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.gm2", HAMMING);
    let b = write(dir.path(), "b.gm2", HAMMING_PERMUTED);
    let (code, out) = run(&["equiv", &a, &b]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "equivalent");
    let c = write(dir.path(), "c.gm2", "8 4\n11000000\n00110000\n00001100\n00000011\n");
    let (_, out) = run(&["equiv", &a, &c]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "inequivalent");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["m2", "generate"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["search", "e72"]).0, 2);
}

#[test]
fn validation_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gm2", "8 4\n1111000\n");
    assert_eq!(run(&["mindist", &bad]).0, 1);
    let h8 = write(dir.path(), "h8.gm2", HAMMING);
    assert_eq!(run(&["fit-enum", &h8]).0, 1);
    let m2 = write(dir.path(), "m2.gm64", "0 * * * 0 0 0 0\n* 0 * * 0 0 0 0\n* * 0 * 0 0 0 0\n* * * 0 0 0 0 0\n");
    let (code, out) = run(&["m2", "validate", &m2]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["codes"][0]["valid"], false);
    let missing = dir.path().join("missing.gm2");
    assert_eq!(run(&["mindist", missing.to_str().unwrap()]).0, 1);
}

#[test]
fn generated_codes_validate() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("m2.gm64");
    assert_eq!(run(&["m2", "generate", "--seed", "11", "--count", "2", "--output", target.to_str().unwrap()]).0, 0);
    let (code, out) = run(&["m2", "validate", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["codes"].as_array().unwrap().len(), 2);
    assert!(v["codes"].as_array().unwrap().iter().all(|c| c["binary_min_distance"].as_u64() >= Some(16)));
}

#[test]
fn fixedpart_report_is_machine_readable() {
    let (code, out) = run(&["fixedpart", "report"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdicts_hold"], true);
    assert_eq!(v["group"]["closure_order"], 96);
    assert_eq!(v["group"]["index_in_s8"], 420);
    assert_eq!(v["order_matches"], false);
}
