//! The `torsqueeze` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsqueeze"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn presets_do_not_depend_on_thread_count() {
    let (one, four) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for name in ["fig5", "fig6b"] {
        for (dir, threads) in [(&one, "1"), (&four, "4")] {
            let out = run(&["preset", name, "--no-timestamp", "--threads", threads, "--out-dir", arg(dir.path())]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
        let file = format!("{name}.csv");
        let a = std::fs::read(one.path().join(&file)).unwrap();
        let b = std::fs::read(four.path().join(&file)).unwrap();
        assert!(a == b, "{name} differs between 1 and 4 threads");
    }
}

#[test]
fn timestamp_line_is_optional() {
    let cfg = config("single_mode.toml");
    let with = String::from_utf8(run(&["spectrum", arg(&cfg), "--n-omega", "3"]).stdout).unwrap();
    let without = String::from_utf8(run(&["spectrum", arg(&cfg), "--n-omega", "3", "--no-timestamp"]).stdout).unwrap();
    assert!(with.lines().any(|l| l.starts_with("# generated_unix=")));
    assert!(!without.contains("generated_unix"));
    assert_eq!(data_rows(&with), data_rows(&without));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["preset", "fig99"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[ellipsoid]\nsemi_axis_a_m = -1\n").unwrap();
    assert_eq!(run(&["validate", arg(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", arg(&dir.path().join("missing.toml"))]).status.code(), Some(1));

    let text = std::fs::read_to_string(config("single_mode.toml")).unwrap();
    let unstable = dir.path().join("unstable.toml");
    std::fs::write(&unstable, text.replace("kappa_over_omega_m = 3.0", "kappa_over_omega_m = 0.1")).unwrap();
    let out = run(&["spectrum", arg(&unstable)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable"));

    // validate reports instability instead of failing on it
    let out = run(&["validate", arg(&unstable)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("stable = false"));
}

#[test]
fn validate_prints_derived_parameters() {
    let out = run(&["validate", arg(&config("two_mode.toml"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "valid"));
    for key in ["omega_m_rad_s", "g_A_over_omega_m", "g_B_over_omega_m", "n_bar", "stable = true"] {
        assert!(text.contains(key), "missing {key}");
    }
    assert!(text.contains("calibrated default") || String::from_utf8_lossy(&out.stderr).contains("calibrated default"));
}

#[test]
fn power_sweep_reproduces_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig2", "--no-timestamp", "--out-dir", arg(dir.path())]);
    assert!(out.status.success());
    let preset = std::fs::read_to_string(dir.path().join("fig2.csv")).unwrap();

    let out = run(&["sweep", arg(&config("two_mode.toml")), arg(&config("power_sweep.toml")), "--no-timestamp"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let swept = String::from_utf8(out.stdout).unwrap();
    assert_eq!(data_rows(&swept).len(), 20);
    assert_eq!(data_rows(&swept), data_rows(&preset));
}

#[test]
fn single_point_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("one.toml");
    std::fs::write(
        &spec,
        "[axis1]\nparameter = \"tweezers[0].power_w\"\nstart = 0.05\nstop = 0.05\nn_points = 1\n",
    )
    .unwrap();
    let out = run(&["sweep", arg(&config("single_mode.toml")), arg(&spec), "--no-timestamp"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    let power: f64 = rows[1].split(',').next().unwrap().parse().unwrap();
    assert_eq!(power, 0.05);

    std::fs::write(
        &spec,
        "[axis1]\nparameter = \"tweezers[0].power_w\"\nstart = 0.05\nstop = 0.06\nn_points = 1\n",
    )
    .unwrap();
    assert_eq!(run(&["sweep", arg(&config("single_mode.toml")), arg(&spec)]).status.code(), Some(1));
}

#[test]
fn example_configs_verify() {
    for name in ["single_mode.toml", "two_mode.toml"] {
        let out = run(&["verify", arg(&config(name)), "--no-timestamp"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn example_map_spec_parses() {
    let spec = torsqueeze::cli::SweepSpec::load(config("kappa_map.toml")).unwrap();
    let cfg = torsqueeze::Config::load(config("two_mode.toml")).unwrap();
    spec.validate(&cfg).unwrap();
    assert_eq!(spec.axis2.unwrap().n_points, 50);
}
