use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn shglab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shglab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("SHGLAB_WORKERS", "1")
        .output()
        .expect("spawn shglab")
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn selftest_passes_at_k16() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(&["selftest", "--band-limit", "16", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert_eq!(s["result"]["passed"], true);
    assert_eq!(s["config"]["band_limit"], 16);
    assert_eq!(s["version"], env!("CARGO_PKG_VERSION"));
    assert!(s["wall_time_s"].as_f64().unwrap() >= 0.0);
    let csv = std::fs::read_to_string(dir.path().join("data.csv")).unwrap();
    assert!(csv.starts_with("check,value,tolerance,pass\n"));
    assert!(!csv.contains("false"));
}

#[test]
fn linear_evolution_conserves() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(
        &[
            "evolve", "--band-limit", "12", "--eps1", "0", "0", "--eps2", "0", "0", "--time", "1", "--dt", "0.01", "--seed", "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert!(s["result"]["mass_drift"].as_f64().unwrap() <= 1e-12);
    assert!(s["result"]["energy_drift"].as_f64().unwrap() <= 1e-10);
    let rows = std::fs::read_to_string(dir.path().join("data.csv")).unwrap().lines().count();
    assert_eq!(rows, 1 + 101);
}

#[test]
fn negative_epsilon_parses() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(
        &["evolve", "--band-limit", "6", "--eps1", "-1", "0", "--eps2", "-1", "0", "--time", "0.05", "--dt", "0.01", "--seed", "3"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(summary(dir.path())["config"]["eps1"][0], -1.0);
}

#[test]
fn require_square_rejects_beta_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(&["count", "--sigma", "2", "1", "--require-square"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("perfect squares"));
}

#[test]
fn count_checks_transformed_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(&["count", "--sigma", "9", "4", "--dyadic-n", "2,4", "--dyadic-l", "4", "--require-square"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    let cells = s["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells.iter().all(|c| c["transformed"]["holds"] == true));
    assert_eq!(s["seed"], Value::Null);
}

#[test]
fn missing_seed_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(&["gn", "--band-limit", "4"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["count", "--sigma", "0", "1"][..],
        &["count", "--dyadic-n", "3"],
        &["evolve", "--seed", "1", "--dt", "2", "--time", "1"],
        &["evolve", "--seed", "1", "--alpha", "-1"],
    ] {
        let o = shglab(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn blow_up_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(
        &["evolve", "--band-limit", "8", "--amplitude", "1e4", "--decay", "0", "--time", "1", "--dt", "0.1", "--seed", "5"],
        dir.path(),
    );
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(summary(dir.path())["error"]["exit_code"], 3);
}

#[test]
fn identical_runs_write_identical_tables() {
    let runs: [&[&str]; 4] = [
        &["strichartz", "--dyadic-n", "1,2", "--dyadic-l", "2", "--trials", "2", "--seed", "9"],
        &["projector-bilinear", "--dyadic-n", "2,4", "--dyadic-l", "3", "--trials", "3", "--seed", "9"],
        &["gn", "--band-limit", "6", "--trials", "5", "--seed", "9"],
        &["bound", "--band-limit", "6", "--time", "0.05", "--dt", "0.01", "--seed", "9"],
    ];
    for args in runs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for d in [&a, &b] {
            let o = shglab(args, d.path());
            assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        }
        let ta = std::fs::read(a.path().join("data.csv")).unwrap();
        let tb = std::fs::read(b.path().join("data.csv")).unwrap();
        assert!(ta.len() > 20);
        assert_eq!(ta, tb, "{args:?}");
    }
}

#[test]
fn bound_reports_confinement() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(&["bound", "--band-limit", "8", "--time", "0.1", "--dt", "0.01", "--amplitude", "5", "--seed", "2"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert_eq!(s["result"]["violations"], 0);
    assert!(s["result"]["bound"].as_f64().unwrap() >= s["result"]["max_h1_sq"].as_f64().unwrap());
}

#[test]
fn picard_solver_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = shglab(
        &["evolve", "--solver", "picard", "--band-limit", "6", "--amplitude", "0.05", "--time", "0.05", "--seed", "4"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(summary(dir.path())["result"]["meta"]["solver"], "picard");
}
