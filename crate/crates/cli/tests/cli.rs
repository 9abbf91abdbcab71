// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn quadorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadorder")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = quadorder(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn report_schema() {
    let v = json(&["field", "2"]);
    for key in ["campaign", "field", "params", "rows", "violations", "runtime_s", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["field"]["D"], 2);
    assert_eq!(v["field"]["disc"], 8);
    assert_eq!(v["rows"][0]["class_number"], 1);
    assert_eq!(v["rows"][0]["unit_norm"], -1);
}

#[test]
fn negative_discriminants_parse() {
    let v = json(&["order", "-1", "3"]);
    assert_eq!(v["rows"][0]["psi"], 4);
    assert_eq!(v["rows"][0]["ell"], 2);
    let v = json(&["hfd", "-3", "2"]);
    assert_eq!(v["params"]["verdict"], "HFD");
}

#[test]
fn single_value_commands() {
    let v = json(&["davenport", "2,4"]);
    assert_eq!((v["rows"][0]["lower"].as_u64(), v["rows"][0]["upper"].as_u64()), (Some(5), Some(5)));
    let v = json(&["elasticity", "2", "3"]);
    assert_eq!(v["rows"][0]["lower"], "1");
    let v = json(&["mx", "2", "--x", "10"]);
    assert_eq!(v["rows"][0]["m_x"], 12);
    assert_eq!(v["rows"][0]["g"], "15");
}

#[test]
fn campaigns() {
    let v = json(&["scan", "-1", "--fmax", "10"]);
    let fs: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["f"].as_u64().unwrap()).collect();
    assert!(!fs.contains(&5));
    let v = json(&["four-to-one", "2", "--mmax", "2"]);
    assert_eq!(v["rows"][0]["preimages"], serde_json::json!([2]));
    let v = json(&["--threads", "1", "pell", "2", "--mmax", "5", "--factor-budget", "0.01"]);
    assert_eq!(v["params"]["half_pell_prime_indices"], serde_json::json!([2, 3, 5]));
}

#[test]
fn csv_and_table_output() {
    let out = quadorder(&["--format", "csv", "scan", "2", "--fmax", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("f,psi,L,ell"));
    assert_eq!(text.lines().count(), 5);
    let out = quadorder(&["scan", "2", "--fmax", "4"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("status: pass"));
}

#[test]
fn verify_with_config_file() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        cfg,
        "fields = [2]\nf_max = 40\nimaginary_p_max = 50\ngrowth_f_max = 100\nfour_to_one_m_max = 100\n\
         four_to_one_pk_max = 200\npell_m_max = 20\nroskam_p_max = 60\nmx_x_max = 15\n\
         psi_enumeration_f_max = 15\nhfd_f_max = 20\ndavenport_order_max = 8\ncyclic_pk_max = 200"
    )
    .unwrap();
    let v = json(&["verify", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(v["status"], "pass");
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["D"].is_null() || r["D"] == 2));
}

#[test]
fn exit_codes() {
    assert_eq!(quadorder(&["field", "4"]).status.code(), Some(2));
    assert_eq!(quadorder(&["order", "2"]).status.code(), Some(2));
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "f_max = 0").unwrap();
    assert_eq!(quadorder(&["verify", "--config", cfg.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(quadorder(&["verify", "--config", "/nonexistent/config.toml"]).status.code(), Some(2));
    let out = quadorder(&["--budget", "0.05", "--threads", "1", "four-to-one", "2", "--mmax", "100000000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
