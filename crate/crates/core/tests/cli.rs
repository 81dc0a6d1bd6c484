//! Command-line behavior: outputs, exit codes and reproducibility.

use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinball-lab")).args(args).env_remove("PINBALL_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn run_d3_reports_full_coverage() {
    let o = lab(&["run", "--d", "3", "--p", "1e-3", "--shots", "20000", "--predecoder", "pinball"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "pinball");
    assert_eq!(rows[0][5], "1");
}

#[test]
fn dump_pipeline_has_nine_stages() {
    let o = lab(&["dump-pipeline", "--d", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("stage ")).count(), 9);
}

#[test]
fn dump_graph_lists_edges() {
    let o = lab(&["dump-graph", "--d", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.contains(" hook ")));
}

#[test]
fn validate_passes() {
    let o = lab(&["validate", "--d", "5", "--single-edges"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" ok: ")).count(), 2);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "d = 3,5\np = 2e-3\nshots = 3000\npredecoder = pinball,clique,none\nseed = 77\n").unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = lab(&["sweep", "--config", cfg.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", "2");
    let b = run("b.csv", "2");
    assert_eq!(a, b);
    let a = String::from_utf8(a).unwrap();
    let serial = String::from_utf8(run("c.csv", "1")).unwrap();
    assert_eq!(data_rows(&a), data_rows(&serial));
    assert_eq!(data_rows(&a).len(), 6);
}

#[test]
fn report_echoes_configuration() {
    let o = lab(&["run", "--d", "3", "--p", "1e-3", "--shots", "100", "--set", "budget_w=2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["energy"]["budget_w"], 2.0);
    assert_eq!(v["config"]["shots"], 100);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "d = 3\nunknown_key = 1\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["run".into(), "--config".into(), bad.to_str().unwrap().into()],
        vec!["run".into(), "--d".into(), "4".into()],
        vec!["run".into(), "--d".into(), "3,5".into()],
        vec!["run".into(), "--set".into(), "shots".into()],
        vec!["run".into(), "--shots".into(), "10".into(), "--out".into(), "/nonexistent/dir/x.csv".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(lab(&refs).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn histogram_counts_every_shot() {
    let o = lab(&["histogram", "--d", "3", "--p", "1e-3", "--shots", "2000"]);
    assert!(o.status.success());
    let total: u64 = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("length"))
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 2000);
}
