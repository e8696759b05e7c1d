use std::process::{Command, Output};

use fermat_actions::cli::key_from_json;
use fermat_actions::enumeration::{enumerate_actions, key_from_named, ActionParams, NamedSubgroup};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fermat-actions"));
    c.env_remove("FERMAT_ACTIONS_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn output_is_deterministic() {
    let args = ["orbits", "-p", "7", "-n", "3", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 6);
}

#[test]
fn enumerate_json_round_trips() {
    let o = run(&["enumerate", "-p", "5", "-n", "4", "-m", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let parsed: Vec<_> = v["keys"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| key_from_json(k).unwrap())
        .collect();
    let expected = enumerate_actions(&ActionParams::new(5, 4, 2).unwrap()).unwrap();
    assert_eq!(parsed, expected);
    assert_eq!(v["count"], expected.len());
}

#[test]
fn json_keys_are_sorted() {
    let o = run(&["orbits", "-p", "3", "-n", "3", "--format", "json"]);
    let text = stdout(&o);
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn cached_results_match_fresh_results() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["triples", "-p", "5", "-n", "5", "--case", "N5_D3", "--format", "json"];
    let fresh = run(&[&args[..], &["--no-cache"]].concat());
    let first = run(&[&args[..], &["--cache-dir", d]].concat());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run(&[&args[..], &["--cache-dir", d]].concat());
    assert!(fresh.status.success());
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(fresh.stdout, second.stdout);
    let text_fresh = run(&["triples", "-p", "5", "-n", "5", "--case", "N5_D3", "--no-cache"]);
    let text_cached = run(&["triples", "-p", "5", "-n", "5", "--case", "N5_D3", "--cache-dir", d]);
    assert_eq!(text_fresh.stdout, text_cached.stdout);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["table", "--primes", "3,5"])
        .env("FERMAT_ACTIONS_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let again = bin()
        .args(["table", "--primes", "3,5"])
        .env("FERMAT_ACTIONS_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.stdout, again.stdout);
    let off = bin()
        .args(["table", "--primes", "7", "--no-cache"])
        .env("FERMAT_ACTIONS_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(off.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn composite_modulus_is_a_usage_error() {
    let o = run(&["enumerate", "-p", "4", "-n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("composite modulus unsupported"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["enumerate", "-p", "101", "-n", "6", "-m", "3", "--cap", "1000"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["enumerate", "-p", "5"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["enumerate", "-p", "5", "-n", "3", "--no-cache", "--cache-dir", "/tmp"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["triples", "-p", "5", "-n", "5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--only", "13"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_code_reflects_failures() {
    for only in ["2,3", "4", "8,10"] {
        let o = run(&["verify", "--only", only]);
        let text = stdout(&o);
        assert_eq!(text.lines().count(), only.split(',').count());
        let failed = text.lines().any(|l| l.starts_with("[FAIL]"));
        assert_eq!(o.status.code(), Some(if failed { 3 } else { 0 }), "{text}");
    }
}

#[test]
fn models_render() {
    let o = run(&["models", "--key", "K(0,4)", "-p", "5", "-n", "3"]);
    assert_eq!(stdout(&o), "y1^5 = x*(x - 1)^4 ; y2^5 = (x - λ)^4\n");
    let o = run(&["models", "--key", "5/3/2:1,0,4;0,1,0", "--line", "1,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("y^5 = "));
    let o = run(&[
        "models", "--key", "K(1,2)", "-p", "5", "-n", "3", "--points", "0,1,2", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn jacobian_csv() {
    let o = run(&["jacobian", "--key", "K(0,1)", "-p", "7", "-n", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("line,genus,fixed_count,model"));
    let genera: u64 = rows
        .map(|r| {
            r.split(',')
                .nth(if r.starts_with('"') { 2 } else { 1 })
                .unwrap()
                .parse::<u64>()
                .unwrap()
        })
        .sum();
    assert_eq!(genera, 36);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = run(&[
        "table",
        "--primes",
        "3..13",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text, "p,keys,orbits\n3,9,2\n5,27,4\n7,53,6\n11,129,10\n13,179,14\n");
}

#[test]
fn invariants_of_a_named_case() {
    let o = run(&["invariants", "-p", "7", "-n", "3", "--case", "N3_Q7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let keys: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    let params = ActionParams::new(7, 3, 2).unwrap();
    let expected = key_from_named(&params, &NamedSubgroup::parse("K(6,0)", 3).unwrap()).unwrap();
    assert_eq!(keys, [expected.to_string()]);
}

#[test]
fn named_keys_with_a_prefix() {
    let o = run(&["models", "--key", "Z22:K1", "-p", "5", "-n", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("y1^5 = "));
    let o = run(&["jacobian", "--key", "D3:K(1,2)", "-p", "7", "-n", "5", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["genus_sum"], v["total_genus"]);
}
