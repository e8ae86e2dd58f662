use std::path::PathBuf;
use std::process::{Command, Output};

fn coopcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coopcap")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ld_capacity_of_first_example() {
    let o = coopcap(&["ld-capacity", "4", "2", "2", "4", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("capacity 6"));
    let o = coopcap(&["ld-capacity", "--json", "6", "3", "3", "4", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["capacity"], 7);
    assert_eq!(v["achievable"], 7);
}

#[test]
fn ld_verify_small_grid() {
    let o = coopcap(&["ld-verify", "--max", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cases"], 243);
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn ld_sim_writes_trace() {
    let path = tmp("trace.json");
    let o = coopcap(&["ld-sim", "--example", "2", "--prime", "2", "--horizon", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["error_count"], 0);
    assert_eq!(v["y3"].as_array().unwrap().len(), 16);
}

#[test]
fn gauss_gap_sweep_passes_and_is_deterministic() {
    let (a, b) = (tmp("gaps_a.csv"), tmp("gaps_b.csv"));
    for p in [&a, &b] {
        let o = coopcap(&["gauss-gap", "--sweep", "10000", "--seed", "1", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(x.iter().filter(|&&c| c == b'\n').count(), 10_001);
}

#[test]
fn gauss_gap_regime_one_reports_branch_gap() {
    let o =
        coopcap(&["gauss-gap", "--sweep", "100", "--regime", "i", "--json", "--out", tmp("r1.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["channels"], 100);
    assert!(v["max_gap"].as_f64().unwrap() <= 20.0);
    if let Some(b) = v["max_branch_gap"].as_f64() {
        assert!(b <= 13.0);
    }
}

#[test]
fn gauss_report_symmetric_point() {
    let o = coopcap(&["gauss-report", "--symmetric", "1000", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["report"]["gap"].is_number());
    assert!(v["symmetric"]["c"].is_number());
    assert!(v["report"]["scheme"]["schemes"][0]["system"]["rows"].is_array());
}

#[test]
fn special_case_sweeps() {
    let o = coopcap(&["feedback", "--sweep", "8", "--out", tmp("fb.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = coopcap(&["reversibility", "--grid", "3", "--random", "300", "--out", tmp("rev.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = coopcap(&["fig2", "--hD-db", "60", "--alpha-step", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("alpha,normalized_C,analytic_limit\n"));
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(coopcap(&["nonsense"]).status.code(), Some(2));
    assert_eq!(coopcap(&["ld-capacity", "1", "2"]).status.code(), Some(2));
    assert_eq!(coopcap(&["ld-sim", "--example", "4"]).status.code(), Some(2));
    assert_eq!(coopcap(&["ld-sim", "--example", "3", "--prime", "2"]).status.code(), Some(2));
    assert_eq!(coopcap(&["gauss-gap", "--db-min", "5", "--db-max", "1"]).status.code(), Some(2));
}
