//! End-to-end checks of the binary: flag handling, exit codes, output
//! determinism and the documented file formats.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_csbubble"))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("missing {name}: {e}"))
}

#[test]
fn region_su3_line_and_junction() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["region", "--cartan", "a2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("junction point"), "{stdout}");

    let line = read(dir.path(), "sigma_line.csv");
    let mut rows = 0;
    for row in line.lines().skip(1) {
        let cols: Vec<f64> = row.split(',').take(3).map(|x| x.parse().unwrap()).collect();
        let (alpha1, alpha2) = (cols[1], cols[2]);
        assert!(
            (2.0 * alpha1 + alpha2 - 6.0).abs() < 1e-12,
            "line constraint broken: {row}"
        );
        rows += 1;
    }
    assert!(rows >= 100);
    let region = read(dir.path(), "region.csv");
    assert!(region.starts_with("alpha1,alpha2,in_omega,in_s,in_sigma,g,h,j_gap"));
}

#[test]
fn region_b2_line_is_vertical() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["region", "--cartan", "b2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    for row in read(dir.path(), "sigma_line.csv").lines().skip(1) {
        let alpha1: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((alpha1 - 3.0).abs() < 1e-12, "line not vertical: {row}");
    }
}

#[test]
fn region_g2_reports_empty_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["region", "--cartan", "g2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Sigma empty"));
    // header-only line file
    assert_eq!(read(dir.path(), "sigma_line.csv").lines().count(), 1);
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["shoot", "--a1", "1.0"],
        vec!["shoot", "--preset", "nonsense"],
        vec!["shoot", "--preset", "su3-ref", "--eps", "1.5"],
        vec!["scalar", "--a1", "1.0", "--a2", "1.0", "--gamma", "2.0"],
        vec![
            "shoot", "--a1", "1.0", "--a2", "1.0", "--alpha1", "1.5", "--alpha2", "3.0", "--gamma",
            "3.0",
        ],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {out:?}");
    }
}

#[test]
fn shoot_off_line_pair_exits_2() {
    let out = bin()
        .args([
            "shoot", "--a1", "1.0", "--a2", "1.0", "--alpha1", "1.7", "--alpha2", "3.0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scalar_outputs_are_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["scalar", "--preset", "su3-ref", "--rtol", "1e-8", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        (
            read(dir.path(), "scalar_profile.csv"),
            read(dir.path(), "summary.csv"),
        )
    };
    let (a1, a2) = run();
    let (b1, b2) = run();
    assert_eq!(a1, b1, "profile CSV not byte-identical across runs");
    assert_eq!(a2, b2);
    assert!(a1.starts_with("t,r,U,rU',residual_mass"));
}

#[test]
fn shoot_writes_profile_with_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "shoot", "--preset", "su3-ref", "--eps", "1e-5", "--rtol", "1e-8", "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let profile = read(dir.path(), "profile.csv");
    assert!(profile.starts_with("t,r,u1,u2,w1,w2,P,Q"));
    // t strictly increasing
    let mut prev = f64::NEG_INFINITY;
    for row in profile.lines().skip(1) {
        let t: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert!(t > prev);
        prev = t;
    }
    let summary = read(dir.path(), "summary.txt");
    assert!(
        summary.contains("classification = entire-nontopological"),
        "{summary}"
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "a1 = 1.0\na2 = 1.0\ngamma = 3.0\nrtol = 1e-8  # quick\n",
    )
    .unwrap();
    let out = bin()
        .args(["scalar", "--config"])
        .arg(&cfg)
        .args(["--gamma", "2.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let summary = read(dir.path(), "summary.txt");
    assert!(
        summary.contains("gamma_target = 2.5"),
        "flag did not override config: {summary}"
    );
}

#[test]
fn sweep_emits_documented_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "sweep",
            "--preset",
            "su3-ref",
            "--eps-start",
            "1e-3",
            "--eps-count",
            "2",
            "--rtol",
            "1e-8",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let table = read(dir.path(), "sweep.csv");
    assert!(table.starts_with(
        "eps,R1,R2,R3,R4,R5,alpha1,alpha2,mass12_13,mass11_13,mass1_tail,mass2_tail,pohozaev_residual,classification"
    ));
    assert_eq!(table.lines().count(), 3);
    let inner = read(dir.path(), "blowdown_inner.csv");
    assert!(inner.starts_with("r,scaled_u,omega,diff"));
}
