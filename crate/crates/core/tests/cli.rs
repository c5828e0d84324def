use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bargmann::circuit::Circuit;
use bargmann::sweep::SweepResult;

fn bargmann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bargmann"))
        .args(args)
        .output()
        .unwrap()
}

fn sweep_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["sweep", "--output", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    bargmann(&args)
}

#[test]
fn default_sweep_writes_201_rows_with_the_dip_at_the_centre() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep_into(
        dir.path(),
        &["--spins", "3", "--spin", "1/2", "--format", "csv,json,svg"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 201);
    let abs: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    let k = (0..abs.len()).min_by(|&a, &b| abs[a].total_cmp(&abs[b])).unwrap();
    let j: f64 = rows[k][0].parse().unwrap();
    assert_eq!(j, 0.5);
    assert_eq!(rows[200][7], "");
    for panel in ["trajectory", "phase", "magnitude", "speed"] {
        assert!(dir.path().join(format!("sweep_{panel}.svg")).exists());
    }

    // JSON re-parses to exactly the CSV numbers.
    let json = fs::read_to_string(dir.path().join("sweep.json")).unwrap();
    let result = SweepResult::from_json(&json).unwrap();
    assert_eq!(result.to_csv(), csv);
    let reparsed = SweepResult::from_json(&result.to_json()).unwrap();
    assert_eq!(reparsed, result);
}

#[test]
fn one_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep_into(
        dir.path(),
        &[
            "--spins",
            "3",
            "--j-min",
            "0",
            "--j-max",
            "0",
            "--j-steps",
            "1",
            "--radius",
            "0.5",
        ],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn usage_errors_exit_with_one() {
    let out = bargmann(&["sweep", "--vertices", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("𝒩 ⩾ 3 for non-trivial Bargmann phases"));
    assert_eq!(bargmann(&["sweep", "--spin", "3/2"]).status.code(), Some(1));
    assert_eq!(bargmann(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bargmann(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    fs::write(&config, "spins = 5\nvertices = 40\nj-steps = 21\n").unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = sweep_into(d, &["--config", config.to_str().unwrap(), "--threads", "1"]);
        assert!(out.status.success());
    }
    let read = |d: &Path| fs::read(d.join("sweep.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let strip = |d: &Path| {
        fs::read_to_string(d.join("MANIFEST"))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("generated_unix"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(strip(&a).contains("spins: 5"));
}

#[test]
fn reproduce_speed_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = bargmann(&["reproduce", "fig6", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(dir.path().join("fig6_speed.csv").exists());
    assert!(dir.path().join("fig6_speed.svg").exists());
}

#[test]
fn reproduce_vertex_count_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = bargmann(&["reproduce", "fig5", "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for v in [100, 150, 200, 250, 300] {
        assert!(dir.path().join(format!("fig5_V{v}_magnitude.csv")).exists());
    }
}

#[test]
fn circuit_dump_round_trips() {
    let out = bargmann(&["circuit", "--vertices", "4", "--radius", "0.25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let c = Circuit::from_json(&text).unwrap();
    assert_eq!(c.len(), 4);
    assert_eq!(c.to_json().trim(), text.trim());
    assert_eq!(bargmann(&["circuit", "--vertices", "2"]).status.code(), Some(1));
}

#[test]
fn oracle_prints_classical_ground_data() {
    let out = bargmann(&["oracle", "--spins", "4", "--coupling", "1", "--field", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["energy"], -4.0);
    assert_eq!(v["degeneracy"], 2);
    let out = bargmann(&[
        "oracle",
        "--spins",
        "3",
        "--coupling",
        "10",
        "--field",
        "0",
        "--brute-force",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["energy"], -10.0);
}
