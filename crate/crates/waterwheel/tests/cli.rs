//! End-to-end checks of the `waterwheel` binary: flags, config handling and
//! exit codes (0 ok, 1 usage/config, 2 numerical, 3 I/O).

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_waterwheel"))
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args([
            "run",
            "--scenario",
            "steady-asymmetric",
            "--grid-n",
            "51",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for name in [
        "trajectory.csv",
        "g_series.csv",
        "events.csv",
        "region.csv",
        "summary.json",
    ] {
        assert!(out.join(name).is_file(), "{name} missing");
    }
    // Header-first rectangular CSV.
    let text = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "tau,x,y,z,a2,b2,circle_center_a,circle_center_b,circle_radius"
    );
    let cols = header.split(',').count();
    for line in lines {
        assert_eq!(line.split(',').count(), cols);
    }
}

#[test]
fn unknown_flag_is_usage_error() {
    let output = bin().args(["run", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_scenario_is_usage_error() {
    let output = bin()
        .args(["run", "--scenario", "sideways"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown scenario kind"));
}

#[test]
fn malformed_config_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    let mut f = std::fs::File::create(&cfg).unwrap();
    writeln!(f, "x0 = 1").unwrap();
    writeln!(f, "this line has no equals sign").unwrap();
    drop(f);
    let output = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains(":2:"), "diagnostic was: {stderr}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("base.conf");
    std::fs::write(&cfg, "scenario = unsteady-symmetric\nx0 = 0\nt-end = 2\n").unwrap();
    let out = dir.path().join("run");
    let output = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--scenario", "steady-asymmetric", "--grid-n", "21", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let summary = std::fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("\"scenario\": \"steady-asymmetric\""));
}

#[test]
fn numerical_blowup_exits_2_and_names_tau() {
    let dir = tempfile::tempdir().unwrap();
    // A 1.0 step is far outside the stability region of the stiffened
    // post-ramp dynamics.
    let output = bin()
        .args([
            "run",
            "--step",
            "1",
            "--sample-interval",
            "1",
            "--grid-n",
            "21",
            "--out",
        ])
        .arg(dir.path().join("run"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("tau"), "diagnostic was: {stderr}");
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // A regular file where the output directory should go.
    let blocker = dir.path().join("blocked");
    std::fs::write(&blocker, "file").unwrap();
    let output = bin()
        .args(["run", "--t-end", "2", "--grid-n", "21", "--out"])
        .arg(&blocker)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn suite_creates_six_directories() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("suite");
    let status = bin().args(["suite", "--out"]).arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let expected = [
        "unsteady-asymmetric-x0-1",
        "steady-asymmetric-x0-1",
        "unsteady-symmetric-x0-1",
        "unsteady-asymmetric-x0-0",
        "steady-asymmetric-x0-0",
        "unsteady-symmetric-x0-0",
    ];
    for name in expected {
        assert!(out.join(name).is_dir(), "{name} missing");
        assert!(out.join(name).join("summary.json").is_file());
    }
    let comparison = std::fs::read_to_string(out.join("comparison.json")).unwrap();
    // The rest-state symmetric wheel never switches sign; the asymmetric
    // wheels do.
    assert!(comparison.contains("\"claimed_order_holds\""));
    assert!(comparison.contains("\"x0=0\": true"));
}
