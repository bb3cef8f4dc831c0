use std::path::Path;
use std::process::{Command, Output};

fn causet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causet")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn result_json_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ck.toml", "seed = 3\nK = 4\nn_trials = 4000\n[model]\nkind = \"flat_cylinder\"\nT = 2.0\n");
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}"));
        let o = causet(&["ck", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", workers]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        for f in ["result.json", "distribution.csv", "classes.csv", "timing.json"] {
            assert!(out.join(f).exists(), "missing {f}");
        }
        outputs.push(std::fs::read(out.join("result.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let json: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(json["config"]["seed"], 3);
    assert_eq!(json["config"]["model"]["kind"], "flat_cylinder");
    assert!(json.get("wall_clock_seconds").is_none());
}

#[test]
fn seed_flag_overrides_and_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gh.toml", "net_size = 5\n[model]\nkind = \"lightcone_square\"\n");
    let out = dir.path().join("gh");
    let o = causet(&["gh", "--config", &cfg, "--seed", "42", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 42);
    assert_eq!(json["metrics"]["upper"]["value"], 0.0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("distance.json")).unwrap()).unwrap();
    for key in ["estimate", "lower_bound", "net_size", "n_mc", "seed", "standard_error", "search_trace_path"] {
        assert!(report.get(key).is_some(), "distance report lacks {key}");
    }
    assert!(out.join(report["search_trace_path"].as_str().unwrap()).exists());
}

#[test]
fn config_errors_exit_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "seed = 1\nK = 3\nn_trails = 10\n");
    let o = causet(&["ck", "--config", &cfg, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("n_trails"), "{err}");

    let cfg = write_config(dir.path(), "infeasible.toml", "K = 4\n[thm2]\nv = 0.5\n");
    let o = causet(&["thm2", "--config", &cfg, "--out", dir.path().join("y").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));

    let cfg = write_config(dir.path(), "other.toml", "experiment = \"thm3\"\n");
    let o = causet(&["ck", "--config", &cfg, "--out", dir.path().join("z").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_checks_give_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // a far too small trial count cannot reach the E ≥ 0.99 target at T = 2
    let cfg = write_config(dir.path(), "thm3.toml", "n_trials = 500\n[thm3]\nT_values = [1.0, 2.0]\n");
    let out = dir.path().join("t");
    let o = causet(&["thm3", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAIL largest_T_at_least_0.99"), "{stdout}");
    assert!(out.join("e_of_t.csv").exists() && out.join("e_of_t.dat").exists());
}
