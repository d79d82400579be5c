use std::path::Path;
use std::process::{Command, Output};

fn skyrme_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skyrme-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn out_flag(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn compare_kink_writes_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = skyrme_lab(&["compare-kink", "--out", &out_flag(dir.path())]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("kink_comparison.dat")).unwrap();
    assert!(text.contains("lhs_kink"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("wrote"));
}

#[test]
fn flag_validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = skyrme_lab(&["evolve", "--j", "200", "--out", &out_flag(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).starts_with("error[validation]:"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn config_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "# comment\nN = 64\nbogus = 1\n").unwrap();
    let out = skyrme_lab(&["static", "-c", &config.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error[parse]: line 3"), "{err}");
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = skyrme_lab(&["static", "-c", "/nonexistent/skyrme.cfg"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error[io]:"), "{}", stderr(&out));
}

#[test]
fn spectrum_requires_an_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = skyrme_lab(&["spectrum", "--out", &out_flag(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("input"));
}

#[test]
fn evolve_then_spectrum_recovers_the_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = out_flag(dir.path());
    let out = skyrme_lab(&[
        "evolve",
        "--t_end",
        "1",
        "--snapshots",
        "0,1",
        "--out",
        &out_dir,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let snapshot = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| {
            p.file_name()
                .unwrap()
                .to_string_lossy()
                .ends_with("_t0.dat")
        })
        .expect("t = 0 snapshot");
    let out = skyrme_lab(&[
        "spectrum",
        "--input",
        &snapshot.display().to_string(),
        "--out",
        &out_dir,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("largest mode j=16"), "{summary}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = skyrme_lab(&[
            "static",
            "--k",
            "2",
            "--variant",
            "pion-mass",
            "--out",
            &out_flag(dir.path()),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let name = "profile_k2_n1_pion-mass.dat";
    let first = std::fs::read(a.path().join(name)).unwrap();
    let second = std::fs::read(b.path().join(name)).unwrap();
    assert_eq!(first, second);
}
