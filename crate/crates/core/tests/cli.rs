use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hcn_ris::experiment::{RESULTS_HEADER, SUMMARY_HEADER};
use hcn_ris::scenario::presets;

fn hcn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcn-ris")).args(args).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn sweep_into(out: &Path) -> Output {
    hcn(&[
        "sweep",
        "--axis",
        "ris_e",
        "--values",
        "1,3",
        "--seeds",
        "0,1",
        "--algorithms",
        "PA,CGA",
        "--out",
        out.to_str().unwrap(),
        "--run-label",
        "fixed",
        "--no-timing",
    ])
}

#[test]
fn sweep_writes_results_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = sweep_into(tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("ris_e/fixed");

    let results = read(&dir, "results.csv");
    let mut rows = csv::Reader::from_reader(results.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), RESULTS_HEADER);
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(&rows[0].iter().take(4).collect::<Vec<_>>(), &["ris_e", "1", "0", "PA"]);
    for r in &rows {
        assert!(r[4].parse::<f64>().unwrap() > 0.0);
        let j: f64 = r[5].parse().unwrap();
        assert!((0.0..=1.0).contains(&j));
        assert_eq!(&r[6], "0");
        assert_eq!(r[8].split(';').count(), 10);
    }
    // CGA never sees the panel, so its rows agree across e.
    assert_eq!(rows[1][4], rows[5][4]);

    let summary = read(&dir, "summary.csv");
    assert!(summary.starts_with(&SUMMARY_HEADER.join(",")));
    assert_eq!(summary.lines().count(), 1 + 4);
    for f in ["runs.json", "sweep.json", "config.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
}

#[test]
fn reruns_are_byte_identical_without_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(sweep_into(a.path()).status.success());
    assert!(sweep_into(b.path()).status.success());
    for f in ["results.csv", "summary.csv", "runs.json"] {
        assert_eq!(read(&a.path().join("ris_e/fixed"), f), read(&b.path().join("ris_e/fixed"), f), "{f}");
    }
}

#[test]
fn single_run_and_snapshot_reload() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.json");
    fs::write(&cfg, presets::small_config(2).to_json()).unwrap();
    let out_dir = tmp.path().join("run");
    let out = hcn(&[
        "single",
        "--config",
        cfg.to_str().unwrap(),
        "--algorithm",
        "ro",
        "--seed",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
        "--diagnostics",
        "--no-timing",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(&out_dir, "report.json")).unwrap();
    assert_eq!(report["algorithm"], "RO");
    assert_eq!(report["per_user_rate"].as_array().unwrap().len(), 8);

    let snapshot = hcn_ris::Scenario::from_json(&read(&out_dir, "scenario.json")).unwrap();
    let rebuilt = hcn_ris::scenario::build_scenario(&presets::small_config(2), 5).unwrap();
    assert_eq!(snapshot.to_canonical_json(), rebuilt.to_canonical_json());
    assert!(read(&out_dir, "links.csv").starts_with("bs,user,distance_m"));
}

#[test]
fn validate_config_reports_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("default.json");
    fs::write(&cfg, presets::default_config().to_json()).unwrap();
    let out = hcn(&["validate-config", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("10 cells (4 directional), 55 users"), "{text}");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();

    let big = hcn(&["single", "--algorithm", "OS", "--out", out]);
    assert_eq!(big.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&big.stderr).contains("limit"));

    let mut empty = presets::small_config(1);
    empty.base_stations.clear();
    let cfg = tmp.path().join("empty.json");
    fs::write(&cfg, empty.to_json()).unwrap();
    assert_eq!(hcn(&["validate-config", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));

    let missing = tmp.path().join("missing.json");
    assert_eq!(hcn(&["single", "--config", missing.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    let bad_value = hcn(&["sweep", "--axis", "ris_n", "--values", "2.5", "--seeds", "0", "--out", out]);
    assert_eq!(bad_value.status.code(), Some(2));

    assert_eq!(hcn(&["sweep", "--axis", "bogus", "--values", "1"]).status.code(), Some(2));
}
