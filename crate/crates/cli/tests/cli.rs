use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tqc_cli::ResultTable;

fn tqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn steady_prints_two_bath_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nkind = \"steady\"\n\n[steady]\nomega = 1.0\ntemperatures = [3.0, 1.0]\nrates = [0.1, 0.1]\n",
    );
    let out = dir.path().join("steady.csv");
    let o = tqc(&["steady", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("T_S^ss = 2.01363"), "{}", stdout(&o));
    let table = ResultTable::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((table.column("T_S_ss").unwrap()[0] - 2.013636202).abs() < 1e-8);
}

#[test]
fn transmon_budget_with_defaults() {
    let o = tqc(&["transmon-budget"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("total=10 μs, feasible (T1=20 μs)"), "{}", stderr(&o));
    assert!(stdout(&o).contains("total_us,t1_us,feasible"));
}

#[test]
fn thermalize_final_rows_match_asymptotes() {
    let o = tqc(&["thermalize"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = ResultTable::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(table.columns, ["time", "T_S_curve1", "T_S_curve2", "T_S_curve3"]);
    let last = table.rows.last().unwrap();
    assert_eq!(last[0], 2000.0);
    for (got, want) in last[1..].iter().zip([2.013636202, 2.343694237, 1.681284487]) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn reruns_are_byte_identical_across_job_counts() {
    let a = tqc(&["classify-temp", "--seed", "9", "--jobs", "1"]);
    let b = tqc(&["classify-temp", "--seed", "9", "--jobs", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = tqc(&["collide", "--seed", "3", "--jobs", "2"]);
    let d = tqc(&["collide", "--seed", "3"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn metadata_reruns_the_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nkind = \"collide\"\nseed = 11\n\n[collide]\nschedule = \"sampled\"\ncollisions = 500\nrecord_every = 50\n",
    );
    let first = tqc(&["collide", "--config", &cfg]);
    assert!(first.status.success(), "{}", stderr(&first));
    let table = ResultTable::parse_csv(&stdout(&first)).unwrap();
    assert_eq!(table.rows.len(), 11);
    let echo = write_config(dir.path(), &table.metadata);
    let second = tqc(&["collide", "--config", &echo]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn svg_written_next_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = tqc(&["sweep-gamma", "--out", out.to_str().unwrap(), "--svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("sweep.svg")).unwrap();
    assert!(svg.contains("<polyline"));
    let table = ResultTable::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 41);
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[experiment]\nkind = \"steady\"\n[steady]\nrate = [0.1]\n");
    let out = dir.path().join("never.csv");
    let o = tqc(&["steady", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error[config]: line 4:"), "{err}");
    assert!(o.stdout.is_empty());
    assert!(!out.exists());
}

#[test]
fn duplicate_key_and_missing_kind_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[experiment]\nkind = \"steady\"\nkind = \"steady\"\n");
    let o = tqc(&["steady", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("duplicate"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "[experiment]\n");
    let o = tqc(&["steady", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing experiment kind"));
}

#[test]
fn invalid_value_points_at_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[experiment]\nkind = \"collide\"\n[collide]\ntau = -1.0\n");
    let o = tqc(&["collide", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[config]: line 4:"), "{}", stderr(&o));
}

#[test]
fn numerical_guards_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nkind = \"thermalize\"\n[thermalize]\nrates = [[0.1, 0.1]]\ndt = 2.0\n",
    );
    let o = tqc(&["thermalize", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error[guard]: line 5:"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "[experiment]\nkind = \"steady\"\n[steady]\ntemperatures = [1.0]\nrates = [0.5]\n");
    let o = tqc(&["steady", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_kind_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[experiment]\nkind = \"steady\"\n");
    let o = tqc(&["collide", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.csv");
    let o = tqc(&["verify", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8, "{text}");
    assert!(lines.iter().all(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")));
    let table = ResultTable::parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    let any_failed = table.column("passed").unwrap().contains(&0.0);
    assert_eq!(o.status.code(), Some(if any_failed { 4 } else { 0 }));
}

#[test]
fn sweep_matches_golden_table() {
    let golden = ResultTable::parse_csv(include_str!("golden/sweep_gamma.csv")).unwrap();
    let o = tqc(&["sweep-gamma"]);
    let table = ResultTable::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(table.columns, golden.columns);
    assert_eq!(table.rows.len(), golden.rows.len());
    for (got, want) in table.rows.iter().zip(&golden.rows) {
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-8 * w.abs().max(1e-3), "{got:?} vs {want:?}");
        }
    }
}
