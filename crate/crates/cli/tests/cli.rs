//! End-to-end tests driving the `qfint` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qfint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfint"))
        .args(args)
        .env_remove("QFINT_CACHE_DIR")
        .output()
        .expect("failed to run qfint")
}

fn qfint_cached(args: &[&str], cache_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfint"))
        .args(args)
        .env("QFINT_CACHE_DIR", cache_dir)
        .output()
        .expect("failed to run qfint")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qfint-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn counts_csv_matches_known_rows() {
    let out = qfint(&["counts", "--m", "3", "--q", "5,7"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "m,q,S,Z,N,D,method\n3,5,60,25,40,84,closed\n3,7,126,49,168,174,closed\n"
    );
    let out = qfint(&["counts", "--m", "1", "--q", "9"]);
    assert_eq!(stdout(&out), "m,q,S,Z,N,D,method\n1,9,8,1,0,8,closed\n");
}

#[test]
fn counts_cross_check_passes() {
    let out = qfint(&["counts", "--m", "4", "--q", "3", "--cross-check"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("cross-check: PASS\n"));
}

#[test]
fn counts_rejects_even_q() {
    let out = qfint(&["counts", "--m", "3", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_describes_extension_field() {
    let out = qfint(&["field", "--q", "9"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("p: 3"));
    assert!(s.contains("r: 2"));
    assert!(s.contains("q: 9"));
    // q = 9 = 1 mod 4, so a square root of -1 exists
    assert!(!s.contains("omega: -"));

    let out = qfint(&["field", "--q", "3^3:2,1,1,1"]);
    let s = stdout(&out);
    assert!(s.contains("q: 27"));
    assert!(s.contains("modulus: 2,1,1,1"));
    assert!(s.contains("omega: -"));
}

#[test]
fn srg_row_for_plane_over_f5() {
    let out = qfint(&["srg", "--m", "2", "--q", "5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "m,q,v,k,lambda,mu_num,mu_den,mu_integral,is_srg\n2,5,25,16,9,12,1,true,true\n"
    );
}

#[test]
fn neighbors_agree_with_closed_form() {
    let out = qfint(&["neighbors", "--m", "3", "--q", "7"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("brute: 77"));
    assert!(s.contains("agreement: MATCH"));
}

#[test]
fn witness_example_is_verified() {
    let out = qfint(&["witness", "--q", "5", "--u", "(1,0)", "--v", "(0,1)"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("matrix: 0,4;1,0"));
    assert!(s.contains("VERIFIED"));
}

#[test]
fn witness_reports_impossible_pairs() {
    // norm 1 vs norm 3 in F_7: the ratio is not a square, no map exists
    let out = qfint(&["witness", "--q", "7", "--u", "(1,0)", "--v", "(3,1)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILED"));
}

#[test]
fn clique_deterministic_records_are_stable() {
    let record = stdout(&qfint(&["clique", "--m", "3", "--q", "7", "--deterministic"]));
    assert!(record.starts_with("3 7 8 optimal - "));
    for workers in ["1", "2", "8"] {
        let again = stdout(&qfint(&[
            "--workers",
            workers,
            "clique",
            "--m",
            "3",
            "--q",
            "7",
            "--deterministic",
        ]));
        assert_eq!(record, again, "record differs with {workers} workers");
    }
}

#[test]
fn clique_timeout_degrades_to_partial_result() {
    let out = qfint(&["clique", "--m", "3", "--q", "11", "--time-limit", "1ms"]);
    assert_eq!(out.status.code(), Some(3));
    let s = stdout(&out);
    assert!(s.starts_with("3 11 "));
    assert!(s.contains(" lower_bound "));
}

#[test]
fn clique_prescribed_search_matches_plain() {
    let plain = stdout(&qfint(&["clique", "--m", "3", "--q", "3", "--deterministic"]));
    let pres = stdout(&qfint(&[
        "clique",
        "--m",
        "3",
        "--q",
        "3",
        "--prescribe",
        "(0,0,0);(1,0,0)",
        "--deterministic",
    ]));
    let size = |s: &str| s.split_whitespace().nth(2).unwrap().to_string();
    assert_eq!(size(&plain), size(&pres));
}

#[test]
fn cache_presence_never_changes_output() {
    let dir = scratch_dir("cache");
    let args = ["itable", "--m", "3", "--q", "3,5", "--deterministic"];
    let cold = qfint_cached(&args, &dir);
    assert!(cold.status.success());
    assert!(dir.join("qfint.cache").is_file(), "cache file not written");
    let warm = qfint_cached(&args, &dir);
    let without = qfint(&args);
    assert_eq!(stdout(&cold), stdout(&warm));
    assert_eq!(stdout(&cold), stdout(&without));
    let csv = stdout(&cold);
    assert!(csv.contains("3,3,4,optimal,-"));
    assert!(csv.contains("3,5,25,formula_certified,-"));

    // Same property for the clique command's JSON: a cache hit must not leak
    // into the output (no node counts, no timing differences).
    let jargs = ["--json", "clique", "--m", "3", "--q", "3", "--deterministic"];
    let jcold = qfint_cached(&jargs, &dir);
    let jwarm = qfint_cached(&jargs, &dir);
    assert!(jcold.status.success());
    assert_eq!(stdout(&jcold), stdout(&jwarm));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn construct_writes_verifiable_point_sets() {
    let dir = scratch_dir("construct");
    let path = dir.join("c7.txt");
    let out = qfint(&[
        "construct",
        "circle-plus-line",
        "--q",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("q=7 m=3\n"));
    assert_eq!(text.lines().count(), 8); // header + 7 points

    let check = qfint(&["verify-pointset", path.to_str().unwrap()]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("VERIFIED: 7 points"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_pointset_flags_bad_pairs() {
    let dir = scratch_dir("badset");
    let path = dir.join("bad.txt");
    std::fs::write(&path, "q=3 m=2\n(0,0)\n(1,1)\n").unwrap();
    let out = qfint(&["verify-pointset", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILED: points 0 and 1"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn export_dimacs_triangle() {
    let out = qfint(&["export-dimacs", "--m", "1", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
}

#[test]
fn json_output_is_stable_and_parses() {
    let args = ["--json", "clique", "--m", "3", "--q", "3", "--deterministic"];
    let a = qfint(&args);
    let b = qfint(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["status"], "optimal");
    assert!(v["elapsed_s"].is_null());
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);

    let out = qfint(&["--json", "verify", "groups"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failures"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);

    let out = qfint(&["--json", "srg", "--m", "3", "--q", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][0]["mu_integral"], false);
}

#[test]
fn verify_constructions_suite_passes() {
    let out = qfint(&["verify", "constructions", "--qmax", "13"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("0 failed"));
    assert!(!s.contains("FAIL "));
}

#[test]
fn oversized_field_is_a_usage_error() {
    let out = qfint(&["clique", "--m", "2", "--q", "9999991"]);
    assert_eq!(out.status.code(), Some(2));
}
