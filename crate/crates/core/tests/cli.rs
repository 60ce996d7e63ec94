use std::path::Path;
use std::process::{Command, Output};

use mrs_lab::cli::content_hash;
use serde_json::Value;

fn mrs_lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrs-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("MRS_LAB_SEED")
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const SMALL: &[&str] = &[
    "--nt", "2", "--nr", "4", "--trials", "40", "--snr-db", "0:10:20", "--m1", "2",
];

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = mrs_lab(&["sum-rate", "--nr", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    assert!(!dir.path().join("sum_rate.csv").exists());

    let out = mrs_lab(&["rate-region", "--nt", "2", "--nr", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = mrs_lab(&["lar", "--grow", "nr", "--grid", "16384"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = mrs_lab(
        &["sum-rate", "--nt", "2", "--nr", "4", "--snr-db", "1:0:3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = mrs_lab(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let help = Command::new(env!("CARGO_BIN_EXE_mrs-lab"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for cmd in ["sum-rate", "rate-region", "lar"] {
        assert!(text.contains(cmd), "{text}");
    }
}

#[test]
fn sum_rate_schema_and_rerun_is_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args: Vec<&str> = ["sum-rate", "--seed", "11"]
        .iter()
        .chain(SMALL)
        .copied()
        .collect();
    assert!(mrs_lab(&args, a.path()).status.success());
    assert!(mrs_lab(&args, b.path()).status.success());
    let csv = read(a.path(), "sum_rate.csv");
    assert_eq!(csv, read(b.path(), "sum_rate.csv"));

    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("snr_db,metric,mean_bits,stderr_bits,k,trials,seed")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 8);
    for r in &rows {
        assert_eq!(r.len(), 7);
        assert_eq!((r[5], r[6]), ("40", "11"));
        r[2].parse::<f64>().unwrap();
    }
    let metrics: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[1]).collect();
    for m in [
        "sum_rate",
        "legacy_alone",
        "mrs_wpc",
        "mrs_gauss_bound",
        "est_lower_bound",
        "lar_nr",
    ] {
        assert!(metrics.contains(m), "{m}");
    }
}

#[test]
fn manifest_reproduces_the_run() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args: Vec<&str> = ["rate-region", "--seed", "3", "--alpha-db", "-3"]
        .iter()
        .chain(SMALL)
        .copied()
        .collect();
    assert!(mrs_lab(&args, a.path()).status.success());

    let manifest_path = a.path().join("rate_region.manifest.json");
    let m: Value = serde_json::from_str(&read(a.path(), "rate_region.manifest.json")).unwrap();
    assert_eq!(m["tool"], "mrs-lab");
    assert_eq!(m["command"], "rate-region");
    assert_eq!(m["seed"], 3);
    let csv = read(a.path(), "rate_region.csv");
    assert_eq!(m["outputs"][0]["file"], "rate_region.csv");
    assert_eq!(
        m["outputs"][0]["sha256"],
        content_hash(csv.as_bytes()).as_str()
    );
    assert!(m["notes"][0].as_str().unwrap().starts_with("D = "));

    let out = mrs_lab(
        &["rate-region", "--config", manifest_path.to_str().unwrap()],
        b.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(read(b.path(), "rate_region.csv"), csv);
    let m2: Value = serde_json::from_str(&read(b.path(), "rate_region.manifest.json")).unwrap();
    assert_eq!(m2["scenario"], m["scenario"]);
}

#[test]
fn rate_region_rows_and_disabled_mrs() {
    let dir = tempfile::tempdir().unwrap();
    let args: Vec<&str> = ["rate-region", "--alpha-db", "-inf"]
        .iter()
        .chain(SMALL)
        .copied()
        .collect();
    assert!(mrs_lab(&args, dir.path()).status.success());
    let csv = read(dir.path(), "rate_region.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("snr_db,vertex,legacy_bits,legacy_stderr,mrs_bits,mrs_stderr")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 5);
    let vertices: Vec<&str> = rows[..5].iter().map(|r| r[1]).collect();
    assert_eq!(vertices, ["A", "B", "C", "D", "legacy_alone"]);
    for r in &rows {
        assert_eq!(r[4].parse::<f64>().unwrap(), 0.0, "{r:?}");
    }
}

#[test]
fn lar_defaults_write_one_row_per_grid_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = mrs_lab(
        &[
            "lar",
            "--grow",
            "nt",
            "--grid",
            "16,64,256,1024",
            "--trials",
            "20",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "lar.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("grow_dim,value,exact_bits,lar_bits,rel_gap")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(
        rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
        ["16", "64", "256", "1024"]
    );
    assert!(rows.iter().all(|r| r[0] == "nt"));
}

#[test]
fn seed_from_environment_unless_flag_given() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let dir = tempfile::tempdir().unwrap();
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mrs-lab"));
        cmd.arg("sum-rate")
            .args(SMALL)
            .args(extra)
            .arg("--out")
            .arg(dir.path());
        match env {
            Some(v) => cmd.env("MRS_LAB_SEED", v),
            None => cmd.env_remove("MRS_LAB_SEED"),
        };
        assert!(cmd.output().unwrap().status.success());
        read(dir.path(), "sum_rate.csv")
    };
    let from_env = run(Some("77"), &[]);
    assert!(from_env.lines().nth(1).unwrap().ends_with(",40,77"));
    assert_eq!(from_env, run(None, &["--seed", "77"]));
    let flag_wins = run(Some("77"), &["--seed", "5"]);
    assert!(flag_wins.lines().nth(1).unwrap().ends_with(",40,5"));
    assert!(run(None, &[]).lines().nth(1).unwrap().ends_with(",40,0"));
}

#[test]
fn json_config_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.json");
    std::fs::write(
        &cfg,
        r#"{"nt": 2, "nr": 4, "k": 1, "m1": 2, "snr_grid_db": [5.0, 15.0], "trials": 30, "seed": 9}"#,
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    assert!(mrs_lab(&["sum-rate", "--config", path], dir.path())
        .status
        .success());
    let csv = read(dir.path(), "sum_rate.csv");
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",30,9")));
    assert_eq!(csv.lines().count(), 1 + 2 * 8);

    assert!(mrs_lab(
        &["sum-rate", "--config", path, "--trials", "12"],
        dir.path()
    )
    .status
    .success());
    let csv = read(dir.path(), "sum_rate.csv");
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",12,9")));

    std::fs::write(&cfg, r#"{"nt": 2, "nr": 4, "bogus": 1}"#).unwrap();
    assert_eq!(
        mrs_lab(&["sum-rate", "--config", path], dir.path())
            .status
            .code(),
        Some(2)
    );
}
