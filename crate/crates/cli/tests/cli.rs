use std::path::Path;
use std::process::{Command, Output};

fn plan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plan")).args(args).output().expect("spawn plan")
}

fn write_config(dir: &Path, buffer_b: f64, method: &str) -> String {
    let cfg = serde_json::json!({
        "seed_formation": { "ring_n": 8, "side": 0.9 },
        "additions": 3,
        "buffer_b": buffer_b,
        "edge_p": 0.9,
        "trials": 2,
        "method": method,
        "rng_seed": 7,
        "mc_samples_opt": 500,
        "mc_samples_report": 2000
    });
    let path = dir.join("config.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_writes_outputs_and_plot_reads_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), 0.5, "M4");
    let out = dir.path().join("out");
    let res = plan(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for f in ["summary.csv", "curves.csv", "trial_0.json", "trial_1.json", "formation_0.svg"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let res = plan(&["run", "--config", &cfg, "--method", "M1", "--trials", "1", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.contains("M1") && summary.contains("M4"));

    let svg = dir.path().join("curves.svg");
    let res = plan(&["plot", "--in", out.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), 1.5, "M3");
    let res = plan(&["run", "--config", &cfg, "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));

    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let res = plan(&["run", "--config", dir.path().join("bad.json").to_str().unwrap(), "--out", "x"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn saturated_batch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "seed_formation": { "ring_n": 15, "side": 0.9 },
        "additions": 15,
        "buffer_b": 0.9,
        "edge_p": 0.9,
        "trials": 2,
        "method": "M3",
        "rng_seed": 1,
        "mc_samples_opt": 200,
        "mc_samples_report": 1000
    });
    let path = dir.path().join("config.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let res = plan(&["run", "--config", path.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn geometry_oracle_check_passes() {
    let res = plan(&["oracle-check", "--suite", "geometry", "--instances", "3"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    assert!(String::from_utf8_lossy(&res.stdout).contains("PASS"));
}
