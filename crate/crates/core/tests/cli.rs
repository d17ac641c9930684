use std::path::Path;
use std::process::Command;

use bvlab::harness::{run, ExperimentConfig, Mode};
use bvlab::Error;

fn bvlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bvlab")).args(args).output().expect("binary runs")
}

const SWEEP: &str = r#"
mode = "sweep"
gamma = 1.0
tol = 1e-4
seed = 5

[function]
name = "sbv_mix"

[lambda_grid]
start = 10.0
stop = 1e4
points = 4
"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn config_errors_name_the_field() {
    let bad = SWEEP.replace("points = 4", "points = 0");
    let err = ExperimentConfig::parse(&bad).unwrap_err();
    assert!(matches!(&err, Error::Config(m) if m.contains("lambda_grid.points")), "{err}");
    let bad = SWEEP.replace("start = 10.0", "start = 1e5");
    assert!(matches!(ExperimentConfig::parse(&bad), Err(Error::Config(m)) if m.contains("lambda_grid")));
    let bad = SWEEP.replace("[function]\nname = \"sbv_mix\"\n", "");
    assert!(matches!(ExperimentConfig::parse(&bad), Err(Error::Config(m)) if m.contains("function: required")));
    assert!(matches!(ExperimentConfig::parse("mode = \"nope\""), Err(Error::Config(_))));
}

#[test]
fn toml_and_json_agree() {
    let a = ExperimentConfig::parse(SWEEP).unwrap();
    let json = serde_json::to_string(&a).unwrap();
    let b = ExperimentConfig::parse(&json).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mode, Mode::Sweep);
}

#[test]
fn sweep_is_deterministic_and_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(SWEEP).unwrap();
    cfg.output.dir = tmp.path().join("a");
    let first = run(&cfg).unwrap();
    assert_eq!(first.exit_code, 0);
    cfg.output.dir = tmp.path().join("b");
    run(&cfg).unwrap();
    let read = |d: &str, f: &str| std::fs::read_to_string(tmp.path().join(d).join(f)).unwrap();
    assert_eq!(read("a", "sweep.csv"), read("b", "sweep.csv"));
    assert!(read("a", "sweep.gp").contains("sweep.csv"));
    // the summary records its own output directory
    let dir_b = tmp.path().join("b").display().to_string();
    let dir_a = tmp.path().join("a").display().to_string();
    assert_eq!(read("a", "summary.json"), read("b", "summary.json").replace(&dir_b, &dir_a));
}

#[test]
fn empty_grid_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "bad.toml", &SWEEP.replace("points = 4", "points = 0"));
    let out = bvlab(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_grid.points"));
    let out = bvlab(&["sweep", "--function", "no_such_function"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn thread_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "sweep.toml", SWEEP);
    let mut csv = Vec::new();
    for t in ["1", "3"] {
        let dir = tmp.path().join(format!("t{t}"));
        let out = bvlab(&["sweep", "--config", cfg.to_str().unwrap(), "--threads", t, "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        csv.push(std::fs::read(dir.join("sweep.csv")).unwrap());
    }
    assert_eq!(csv[0], csv[1]);
}

#[test]
fn claims_subcommand_reports_and_fails_on_wrong_constant() {
    let out = bvlab(&["claims", "--only", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] criterion 2"), "{text}");
    let out = bvlab(&["claims", "--only", "2", "--c1", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL] criterion 2"));
}
