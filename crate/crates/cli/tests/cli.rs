use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn uavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn curve() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_curve.csv")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn analytic_limit_row() {
    let out =
        stdout(&uavg(&["analytic", "--formula", "ps-single", "--variant", "main-text", "--nu", "0,0.01", "--big-n", "1,inf"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("nu,N,value,variant"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3][1], "inf");
    assert!((rows[3][2].parse::<f64>().unwrap() - (0.97 + 4.5e-4)).abs() < 1e-15);
    assert_eq!(rows[3][2].split('e').next().unwrap().len(), 18, "17 significant digits");
}

#[test]
fn analytic_empty_grid_exits_zero() {
    let out = stdout(&uavg(&["analytic", "--formula", "fidelity-single", "--big-n", "2"]));
    assert_eq!(out, "nu,N,value,variant\n");
}

#[test]
fn unknown_formula_exits_two() {
    let o = uavg(&["analytic", "--formula", "bogus", "--nu", "0.1", "--big-n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown formula"));
}

#[test]
fn mc_requires_a_seed() {
    let o = uavg(&["mc", "--nu", "0.01", "--big-n", "2", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn mc_zero_samples_exits_two() {
    assert_eq!(uavg(&["mc", "--nu", "0.01", "--big-n", "2", "--samples", "0", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn mc_is_deterministic_and_noise_free_rows_are_one() {
    let args = ["mc", "--nu", "0,0.02", "--big-n", "1,2,4", "--samples", "5000", "--seed", "42"];
    let a = uavg(&args);
    let b = uavg(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let ps = header.iter().position(|c| *c == "ps").unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 6);
    for r in &rows[..3] {
        assert_eq!(r[ps].parse::<f64>().unwrap(), 1.0);
    }
    assert!(String::from_utf8_lossy(&a.stderr).contains("selected"));
}

#[test]
fn different_seeds_differ() {
    let run = |s: &str| stdout(&uavg(&["mc", "--nu", "0.05", "--big-n", "2", "--samples", "2000", "--seed", s]));
    assert_ne!(run("1"), run("2"));
}

#[test]
fn saved_config_replays_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let report = dir.path().join("report.txt");
    let o = uavg(&[
        "mc",
        "--family",
        "type2",
        "--nu",
        "0.01",
        "--big-n",
        "1,2,4",
        "--samples",
        "3000",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
        "--out",
        first.to_str().unwrap(),
        "--save-config",
        cfg.to_str().unwrap(),
    ]);
    stdout(&o);
    let o = uavg(&["--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    stdout(&o);
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    assert!(fs::read_to_string(&report).unwrap().contains("type-ii-fusion"));
}

#[test]
fn config_and_subcommand_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"command":{"parity":{"n":[2],"q":[2],"p":[0.1]}}}"#).unwrap();
    assert_eq!(uavg(&["--config", cfg.to_str().unwrap(), "parity", "--p", "0.1"]).status.code(), Some(2));
    let out = stdout(&uavg(&["--config", cfg.to_str().unwrap()]));
    assert_eq!(data_rows(&out).len(), 1);
    assert_eq!(uavg(&[]).status.code(), Some(2));
}

#[test]
fn malformed_config_exits_three_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, "{\n  \"command\": {\n    \"mc\": {\"nu\": [0.1]}\n  }\n}\n").unwrap();
    let o = uavg(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("c.json:"));
}

#[test]
fn json_mirrors_csv() {
    let base = ["parity", "--n", "2", "--q", "3", "--p", "0,0.1"];
    let csv = stdout(&uavg(&base));
    let json = stdout(&uavg(&[&base[..], &["--format", "json"]].concat()));
    let v: Value = serde_json::from_str(&json).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(v["columns"].as_array().unwrap().len(), header.len());
    let rows = data_rows(&csv);
    for (row, obj) in rows.iter().zip(v["rows"].as_array().unwrap()) {
        let success: f64 = row[header.iter().position(|c| *c == "success").unwrap()].parse().unwrap();
        assert_eq!(obj["success"].as_f64().unwrap(), success);
    }
    assert_eq!(v["rows"][0]["success"].as_f64(), Some(1.0));
}

#[test]
fn encode_check_appends_slope() {
    let out = stdout(&uavg(&["encode-check", "--big-n", "2", "--dtheta", "1e-3,1e-4"]));
    let slope_line = out.lines().find(|l| l.starts_with("# slope_N=2:")).unwrap();
    let slope: f64 = slope_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((1.9..=2.1).contains(&slope), "{slope}");
}

#[test]
fn ft_region_n1_equals_raw_curve() {
    let out = stdout(&uavg(&[
        "ft-region",
        "--curve",
        curve().to_str().unwrap(),
        "--eps",
        "1e-4,1e-3,5e-3,2e-2",
        "--gamma",
        "1e-3,1e-2,3e-2",
        "--big-n",
        "1,2,4",
    ]));
    assert!(out.starts_with("epsilon,gamma,N,effective_error,effective_loss,fault_tolerant\n"));
    let text = fs::read_to_string(curve()).unwrap();
    let c = uavg::io::parse_curve(&curve(), &text).unwrap();
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 36);
    for r in rows.iter().filter(|r| r[2] == "1") {
        let (e, g): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(r[5] == "true", c.contains(e, g), "{r:?}");
    }
}

#[test]
fn bad_curve_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "# code: x\nepsilon,gamma\n1e-4,0.02\n1e-3,oops\n").unwrap();
    let o = uavg(&["ft-region", "--curve", bad.to_str().unwrap(), "--eps", "1e-3", "--gamma", "1e-3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:4:"), "{}", String::from_utf8_lossy(&o.stderr));
    let missing = dir.path().join("missing.csv");
    assert_eq!(uavg(&["ft-region", "--curve", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn svg_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    stdout(&uavg(&[
        "analytic",
        "--formula",
        "ps-single",
        "--nu",
        "0,0.01,0.02",
        "--big-n",
        "1,4,inf",
        "--svg",
        svg.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("<polyline").count() == 9);
}
