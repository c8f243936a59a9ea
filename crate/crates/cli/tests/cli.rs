use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn eyefree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eyefree")).args(args).env_remove("EYEFREE_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kappa_reports_value_and_regime() {
    let out = eyefree(&["kappa", "--eye", "2,2", "--p", "1/2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["formula"]["value"], "3/4");
    assert_eq!(v["result"]["formula"]["regime"], "blue");
    assert_eq!(v["header"]["tool"], "eyefree");
    assert_eq!(v["header"]["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["config"]["eye"], "2,2");
}

#[test]
fn kappa_search_agrees() {
    let v = json(&eyefree(&["kappa", "--eye", "2,3", "--p", "3/4", "--kmax", "4"]));
    assert_eq!(v["result"]["search_agrees"], true);
    assert_eq!(v["result"]["formula"]["regime"], "red");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(eyefree(&["--help"]).status.code(), Some(0));
    assert_eq!(eyefree(&["--version"]).status.code(), Some(0));
    assert_eq!(eyefree(&["sample", "--help"]).status.code(), Some(0));
}

#[test]
fn invalid_config_exits_one() {
    assert_eq!(eyefree(&["verify", "--suite", ""]).status.code(), Some(1));
    assert_eq!(eyefree(&["kappa", "--eye", "2,2", "--p", "0.5"]).status.code(), Some(1));
    assert_eq!(eyefree(&["kappa", "--eye", "2", "--p", "1/2"]).status.code(), Some(1));
    assert_eq!(eyefree(&["kex", "--eye", "2,2", "--n", "8", "--p", "1/2"]).status.code(), Some(1));
    assert_eq!(eyefree(&["nonsense"]).status.code(), Some(1));
    assert_eq!(eyefree(&["--threads", "0", "kappa", "--eye", "2,2", "--p", "1/2"]).status.code(), Some(1));
}

#[test]
fn exhausted_budget_exits_two() {
    let out = eyefree(&["sample", "--n", "14", "--p", "1/2", "--eye", "2,2", "--samples", "1", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kex.json");
    let out = eyefree(&["kex", "--eye", "2,2", "--n", "5", "--p", "1/2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("kex = 8/1"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["optimum"], "8/1");
    assert_eq!(v["result"]["n"], 5);
    assert!(v["config"].get("out").is_none());
    // same config, same hash
    let again = json(&eyefree(&["kex", "--eye", "2,2", "--n", "5", "--p", "1/2"]));
    assert_eq!(again["header"]["config_hash"], v["header"]["config_hash"]);
}

#[test]
fn construct_matches_closed_form() {
    for fam in ["b", "r"] {
        let v = json(&eyefree(&["construct", "--family", fam, "--parts", "3", "--n", "11", "--p", "2/5"]));
        assert_eq!(v["result"]["weight"], v["result"]["closed_form"]["value"]);
    }
}

#[test]
fn lambda_reads_type_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.txt");
    fs::write(&path, "k=2; vcolors=bb; ecolors=g\n").unwrap();
    let v = json(&eyefree(&["lambda", "--type", path.to_str().unwrap(), "--p", "1/2"]));
    assert_eq!(v["result"]["lambda"]["value"], "3/4");
    assert_eq!(v["result"]["certificate_verified"], true);
    assert_eq!(v["config"]["type_text"], "k=2; vcolors=bb; ecolors=g");
}

#[test]
fn region_and_sample_csv_have_headers() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("region.csv");
    let out = eyefree(&["region", "--eye", "2,2", "--n", "4", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tool=eyefree"));
    assert!(lines.contains(&"R,B,R_decimal,B_decimal,witness"));
    let points = json(&out)["result"]["points"].as_array().unwrap().len();
    assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), points + 1);

    let csv = dir.path().join("sample.csv");
    let out = eyefree(&["sample", "--n", "8", "--p", "0.5", "--eye", "2,2", "--samples", "4", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains("# seed=42"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn sample_is_reproducible() {
    let args = ["sample", "--n", "8", "--p", "1/2", "--eye", "2,2", "--samples", "6", "--seed", "9"];
    assert_eq!(eyefree(&args).stdout, eyefree(&args).stdout);
}

#[test]
fn distance_of_a_class_member_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "n=5 p=1/2\nrrggrggggr\n").unwrap();
    let v = json(&eyefree(&["distance", "--input", path.to_str().unwrap(), "--class", "r:2"]));
    assert_eq!(v["result"]["edits"], 0);
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(eyefree(&["distance", "--input", path.to_str().unwrap(), "--class", "q:2"]).status.code(), Some(1));
}

#[test]
fn verify_region_suite_passes() {
    let out = eyefree(&["verify", "--suite", "region", "--seed", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["header"]["seed"], 1);
}
