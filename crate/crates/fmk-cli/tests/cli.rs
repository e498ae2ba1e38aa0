//! End-to-end checks of the binary: exit codes, report shapes, and
//! byte-identical determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmk"))
        .args(args)
        .env("FMK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        !out.stdout.is_empty(),
        "no stdout; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn data_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

#[test]
fn field_p7_reports_inert_norm_27() {
    let out = fmk(&["field", "--p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let three = &v["report"]["splittings"]["3"];
    assert_eq!(three.as_array().unwrap().len(), 1);
    assert_eq!(three[0]["norm"], "27");
    assert_eq!(three[0]["inert"], true);
    assert_eq!(v["report"]["unit_lemma"]["all_pass"], true);
}

#[test]
fn field_p17_two_primes_above_two() {
    let out = fmk(&["field", "--p", "17"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let two = v["report"]["splittings"]["2"].as_array().unwrap();
    assert_eq!(two.len(), 2);
    for row in two {
        assert_eq!(row["f"], 4);
    }
}

#[test]
fn field_usage_errors() {
    let out = fmk(&["field", "--p", "6"]);
    assert_eq!(out.status.code(), Some(64));
    let out = fmk(&["field"]);
    assert_eq!(out.status.code(), Some(64));
    let out = fmk(&["field", "--p", "7", "--bogus"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn frey_known_local_data_at_two() {
    let out = fmk(&["frey", "--p", "7", "--a", "3", "--b", "2", "--j", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v["report"]["local_data"].as_array().unwrap();
    let at2: Vec<_> = rows.iter().filter(|r| r["q"] == 2).collect();
    assert_eq!(at2.len(), 1);
    assert_eq!(at2[0]["local"]["kodaira"], "I1*");
    assert_eq!(at2[0]["local"]["cond_exp"], 3);
    assert_eq!(at2[0]["local"]["v_disc_min"], 8);
    let at3: Vec<_> = rows.iter().filter(|r| r["q"] == 3).collect();
    assert!(at3[0]["local"]["reduction"]
        .as_str()
        .unwrap()
        .starts_with("mult_"));
    let at7: Vec<_> = rows.iter().filter(|r| r["q"] == 7).collect();
    assert_eq!(at7[0]["local"]["reduction"], "good");
}

#[test]
fn frey_rejects_invalid_witness() {
    let out = fmk(&["frey", "--p", "7", "--a", "1", "--b", "0", "--j", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 | a"));
}

#[test]
fn frey_singular_flag() {
    let out = fmk(&["frey", "--p", "17", "--a", "0", "--b", "1", "--kind", "f1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["singular"], true);
}

#[test]
fn bounds_published_constants() {
    let out = fmk(&["bounds", "--p", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let log = v["report"]["c_of_p"]["c_log10"].as_f64().unwrap();
    assert!((log - 2930.0).abs() <= 1.0);
    let out = fmk(&["bounds", "--p", "7"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["endgame_cubic"]["survivor_bound_norm27_d1"], "38");
    // no constants entry: data error
    let out = fmk(&["bounds", "--p", "19"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sieve_demo_records() {
    let path = data_path("newforms.json");
    let out = fmk(&[
        "sieve",
        "--newforms",
        path.to_str().unwrap(),
        "--p",
        "17",
        "--kind",
        "f1",
        "--primes",
        "3:0,67:0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let reports = v["report"]["reports"].as_array().unwrap();
    let selfmatch = reports
        .iter()
        .find(|r| r["label"] == "demo.selfmatch")
        .unwrap();
    assert_eq!(selfmatch["inconclusive"], true);
    assert_eq!(selfmatch["gcd"], "0");
    // bad path: data error
    let out = fmk(&[
        "sieve",
        "--newforms",
        "/nonexistent.json",
        "--p",
        "17",
        "--kind",
        "f1",
        "--primes",
        "3:0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_trivial_only() {
    let out = fmk(&["search", "--mode", "z3p", "--p", "7", "--n", "3", "--max", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["nontrivial_solutions"].as_array().unwrap().len(), 0);
    assert_eq!(v["report"]["trivial_solutions"].as_array().unwrap().len(), 4);
    // budget
    let out = fmk(&["search", "--mode", "z3p", "--p", "7", "--n", "2", "--max", "2000000"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn descent_report() {
    let out = fmk(&["descent", "--p", "7", "--a", "3", "--b", "2", "--ell", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["factorization_identity"], true);
    assert_eq!(v["report"]["three_divides_a"]["consistent"], true);
    assert_eq!(v["report"]["coprimality"]["pass"], true);
    assert_eq!(v["report"]["profile_z3p_valid"], true);
    assert_eq!(v["report"]["ell_power_screen"]["a_is_ell_power"], false);
}

#[test]
fn frey_f2_report() {
    // 17 | a and v2(a) = 1: multiplicative at the prime above 17 (I30);
    // at the primes above 2 the model is non-minimal, the walk would pass
    // step 7, and the row carries the out-of-scope error instead of a guess
    let out = fmk(&["frey", "--p", "17", "--a", "34", "--b", "1", "--kind", "f2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["singular"], false);
    let rows = v["report"]["local_data"].as_array().unwrap();
    let at17: Vec<_> = rows.iter().filter(|r| r["q"] == 17).collect();
    assert_eq!(at17.len(), 1);
    assert_eq!(at17[0]["local"]["kodaira"], "I30");
    assert_eq!(at17[0]["local"]["cond_exp"], 1);
    let at2: Vec<_> = rows.iter().filter(|r| r["q"] == 2).collect();
    assert_eq!(at2.len(), 2);
    for row in &at2 {
        assert!(
            row["error"].as_str().unwrap_or("").contains("step 8"),
            "row: {row}"
        );
    }
}

#[test]
fn reports_byte_identical() {
    for args in [
        vec!["field", "--p", "5"],
        vec!["bounds", "--p", "13"],
        vec!["frey", "--p", "5", "--a", "3", "--b", "2", "--j", "1", "--k", "2"],
        vec!["search", "--mode", "z17", "--n", "5", "--max", "6"],
    ] {
        let a = fmk(&args);
        let b = fmk(&args);
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = fmk(&["field", "--p", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["p"], 5);
}
