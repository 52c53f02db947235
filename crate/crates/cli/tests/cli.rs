use serde_json::Value;

use knormal_cli::report::without_timing;
use knormal_cli::run_args;

fn run(args: &[&str]) -> (i32, Value) {
    let inv = run_args(std::iter::once("knormal").chain(args.iter().copied()));
    assert!(inv.stderr.is_empty(), "stderr: {}", inv.stderr);
    (inv.code, serde_json::from_str(&inv.stdout).expect("json report"))
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("knormal-cli-{}-{name}", std::process::id()))
}

#[test]
fn search_pair_without_witness_exits_3() {
    let (code, rep) = run(&["search-pair", "--q", "4", "--n", "5", "--r", "1", "--k", "1"]);
    assert_eq!(code, 3);
    assert_eq!(rep["result"]["found"], false);
    assert_eq!(rep["result"]["witness"], Value::Null);
    assert_eq!(rep["schema_version"], 1);
    assert_eq!(rep["command"], "search-pair");
}

#[test]
fn sieve_8_14_fails() {
    let (code, rep) = run(&["sieve", "--q", "8", "--n", "14", "--theta", "3"]);
    assert_eq!(code, 3);
    assert_eq!(rep["result"]["holds"], false);
}

#[test]
fn spnbt_target_separates_exceptions_from_controls() {
    let (code, rep) = run(&["reproduce", "--target", "spnbt-exceptions"]);
    assert_eq!(code, 0);
    let rows = rep["result"]["rows"].as_array().unwrap();
    let missing: Vec<(u64, u64)> = rows
        .iter()
        .filter(|r| r["found"] == false)
        .map(|r| (r["q"].as_u64().unwrap(), r["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(missing, vec![(2, 3), (2, 4), (3, 4), (4, 3), (5, 4)]);
    let found: Vec<(u64, u64)> = rows
        .iter()
        .filter(|r| r["found"] == true)
        .map(|r| (r["q"].as_u64().unwrap(), r["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(found, vec![(2, 5), (3, 5), (7, 4), (4, 4), (5, 5)]);
}

#[test]
fn every_target_matches_its_expectations() {
    for t in ["t13-exception", "conjecture-exceptions", "table6-spot", "thm11-spot"] {
        let (code, rep) = run(&["reproduce", "--target", t]);
        assert_eq!(code, 0, "{t}: {}", rep["result"]["mismatches"]);
        assert_eq!(rep["result"]["all_match"], true);
    }
}

#[test]
fn worker_count_does_not_change_reports() {
    let cases: &[&[&str]] = &[
        &["search-pair", "--q", "5", "--n", "5", "--r", "1", "--k", "1"],
        &["direct-search", "--q", "5", "--n", "6"],
        &["sieve", "--q", "8", "--n", "14", "--theta", "3"],
        &["knormal", "--field", "3:6", "--census", "2"],
        &["reproduce", "--target", "thm11-spot"],
    ];
    for args in cases {
        let mut one = vec!["--jobs", "1"];
        one.extend_from_slice(args);
        let mut many = vec!["--jobs", "4"];
        many.extend_from_slice(args);
        let a = serde_json::to_string(&without_timing(run(&one).1)).unwrap();
        let b = serde_json::to_string(&without_timing(run(&many).1)).unwrap();
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn witnesses_round_trip_through_saved_reports() {
    for (name, args) in [
        ("pair", vec!["search-pair", "--q", "7", "--n", "4", "--r", "1", "--k", "0"]),
        ("direct", vec!["direct-search", "--q", "2", "--n", "7"]),
        ("target", vec!["reproduce", "--target", "t13-exception"]),
    ] {
        let inv = run_args(std::iter::once("knormal").chain(args.iter().copied()));
        let path = temp_path(name);
        std::fs::write(&path, &inv.stdout).unwrap();
        let (code, rep) = run(&["verify-report", path.to_str().unwrap()]);
        std::fs::remove_file(&path).ok();
        assert_eq!(code, 0, "{name}: {}", rep["result"]["failures"]);
        assert!(rep["result"]["witnesses_checked"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn tampered_witness_is_rejected() {
    let (_, mut rep) = run(&["search-pair", "--q", "7", "--n", "4", "--r", "1", "--k", "0"]);
    rep["result"]["witness"] = Value::String("1,0,0,0".into());
    let path = temp_path("tampered");
    std::fs::write(&path, serde_json::to_string(&rep).unwrap()).unwrap();
    let (code, out) = run(&["verify-report", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 3);
    assert_eq!(out["result"]["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_projection_uses_fixed_columns() {
    let inv = run_args(["knormal", "--format", "csv", "reproduce", "--target", "table6-spot"]);
    let mut lines = inv.stdout.lines();
    assert_eq!(lines.next(), Some("q,n,theta,holds,expected,matches,d,big_h,lhs,rhs"));
    assert_eq!(lines.next(), Some("2,5,2,false,false,true,,,,"));
}

#[test]
fn errors_map_to_stable_exit_codes() {
    let usage = run_args(["knormal", "search-pair", "--q", "4"]);
    assert_eq!(usage.code, 2);
    assert!(usage.stdout.is_empty());
    let bad_r = run_args(["knormal", "search-pair", "--q", "4", "--n", "2", "--r", "7", "--k", "0"]);
    assert_eq!(bad_r.code, 16);
    assert!(bad_r.stderr.starts_with("error [R_NOT_DIVISOR]"));
    let too_big = run_args(["knormal", "--ceiling", "10", "direct-search", "--q", "2", "--n", "11"]);
    assert_eq!(too_big.code, 13);
}
