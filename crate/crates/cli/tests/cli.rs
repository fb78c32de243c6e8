use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gibbs_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gibbs-lab"))
        .args(args)
        .env_remove("GIBBS_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectral_complete_graph() {
    let out = gibbs_lab(&["spectral", "--network", "builtin:complete:8"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lambda"].as_f64().unwrap() - 8.0 / 7.0).abs() < 1e-12);
    assert!((v["gamma"].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-12);
    assert_eq!(v["d"], 8);
    assert_eq!(v["connected"], true);
}

#[test]
fn spectral_reports_components_of_disconnected_network() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("net.json");
    fs::write(&file, r#"{"d": 4, "edges": [[0, 1, 1.0], [2, 3, 2.0]]}"#).unwrap();
    let out = gibbs_lab(&["spectral", "--network", path(&file)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["connected"], false);
}

#[test]
fn truncnorm_uniform_limit() {
    let out = gibbs_lab(&["truncnorm", "--sigma", "inf", "--p", "0.3", "--u", "0.25"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["eps_mean"].as_f64().unwrap() - 0.2).abs() < 1e-15);
    assert!((v["eps_variance"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-15);
    assert_eq!(v["quantile"][0]["value"], 0.25);
    assert!(v["mass"].is_null());
}

#[test]
fn invalid_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("s.csv");
    for args in [
        vec![
            "sample",
            "--network",
            "builtin:complete:4",
            "--A",
            "0",
            "--k",
            "10",
        ],
        vec![
            "sample",
            "--network",
            "builtin:star:4",
            "--A",
            "5",
            "--k",
            "10",
        ],
        vec![
            "sample",
            "--network",
            "/no/such/network.json",
            "--A",
            "5",
            "--k",
            "10",
        ],
        vec![
            "sample",
            "--network",
            "builtin:complete:4",
            "--A",
            "5",
            "--k",
            "10",
            "--start",
            "2",
        ],
        vec![
            "mix-estimate",
            "--network",
            "builtin:complete:4",
            "--A",
            "5",
            "--k",
            "10",
            "--delta",
            "1.5",
        ],
        vec!["no-such-command"],
    ] {
        let mut args = args;
        if args[0] != "no-such-command" {
            args.extend(["--out", path(&out_csv)]);
        }
        let out = gibbs_lab(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn infeasible_oracle_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = gibbs_lab(&[
        "stationary-oracle",
        "--network",
        "builtin:complete:8",
        "--A",
        "300",
        "--count",
        "10",
        "--out",
        path(&dir.path().join("o.csv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn sample_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let out = gibbs_lab(&[
        "sample",
        "--network",
        "builtin:cycle:6",
        "--A",
        "20",
        "--k",
        "4000",
        "--replicas",
        "3",
        "--seed",
        "9",
        "--out",
        path(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("replica,step,barycenter,energy"));
    assert_eq!(lines.count(), 3 * 2001);

    let manifest: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("run.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "sample");
    assert_eq!(manifest["config"]["seed"], 9);
    assert_eq!(manifest["network"]["d"], 6);
}

#[test]
fn dump_every_writes_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dump.csv");
    let out = gibbs_lab(&[
        "sample",
        "--network",
        "builtin:path:3",
        "--A",
        "5",
        "--k",
        "100",
        "--dump-every",
        "10",
        "--start",
        "zero",
        "--out",
        path(&csv),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("replica,step,p0,p1,p2\n0,0,0,0,0\n"));
    assert_eq!(text.lines().count(), 1 + 11);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let csv = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_gibbs-lab"))
            .args([
                "mix-estimate",
                "--network",
                "builtin:complete:4",
                "--A",
                "10",
                "--k",
                "5000",
                "--replicas",
                "8",
                "--delta",
                "0.05",
                "--seed",
                "3",
                "--out",
                path(&csv),
            ])
            .env("GIBBS_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        fs::read(csv).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "3");
    assert!(String::from_utf8_lossy(&a).starts_with("replica,step,max_gap\n"));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn bad_thread_variable_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_gibbs-lab"))
        .args(["spectral", "--network", "builtin:complete:3"])
        .env("GIBBS_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_commands_write_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = gibbs_lab(&[
        "fig-variance",
        "--network",
        "builtin:complete:4",
        "--A",
        "5",
        "--replicas",
        "20",
        "--svg",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("fig-variance_A5.csv")).unwrap();
    assert!(text.lines().next().unwrap().starts_with("step,"));
    assert!(dir.path().join("fig-variance_A5.svg").exists());

    let out = gibbs_lab(&[
        "fig-hitting",
        "--which",
        "T",
        "--network",
        "builtin:complete:4",
        "--A",
        "5,8",
        "--replicas",
        "20",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("fig-hitting_T.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "A,mean,std,replicas,censored,k_max");
    assert_eq!(lines.len(), 3);
}

#[test]
fn oracle_draws_are_in_the_cube() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let out = gibbs_lab(&[
        "stationary-oracle",
        "--network",
        "builtin:complete:2",
        "--A",
        "3",
        "--count",
        "50",
        "--out",
        path(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p0,p1,barycenter,energy"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    for row in rows {
        for x in row.split(',').take(2) {
            let x: f64 = x.parse().unwrap();
            assert!((0.0..=1.0).contains(&x));
        }
    }
}
