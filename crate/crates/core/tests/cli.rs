use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[problem]
dimension = 1
half_width = 30.0
coefficient = { kind = "constant", diffusivity = 1.0 }
reaction = { kind = "logistic", rate = 1.0 }
initial = { kind = "bump", radius = 1.0, height = 1.0 }

[solver]
h = 0.2
t_final = 6.0
comb = 0.5

[analysis]
speed_window = [3.0, 6.0]
"#;

const TUMOR: &str = r#"
[tumor]
sigma = 0.3
events = [{ t = 3.0, beta = 0.5 }]
"#;

fn kpplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpplab")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("out");
    let o = kpplab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trajectory.csv", "inf_rhs.csv", "t_eps.csv", "certificate.txt"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    assert!(!out.join("protocol.csv").exists());
    let header = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(!header.contains('\r'));
}

#[test]
fn tumor_run_writes_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tumor.toml", &format!("{SMALL}{TUMOR}"));
    let out = dir.path().join("out");
    let o = kpplab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let protocol = fs::read_to_string(out.join("protocol.csv")).unwrap();
    assert!(protocol.lines().count() > 3);
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(kpplab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    }
    for f in ["trajectory.csv", "inf_rhs.csv", "certificate.txt"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn misspelled_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", &SMALL.replace("reaction =", "reation ="));
    let o = kpplab(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reation"));
}

#[test]
fn verify_reports_failure_for_an_impossible_ratio() {
    let o = kpplab(&["verify", "kernel-mono", "--tau", "1", "--sigma", "0.99"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn unknown_suite_is_rejected() {
    assert_eq!(kpplab(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn sweep_emits_one_row_per_combination() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tumor.toml", &format!("{SMALL}{TUMOR}"));
    let o = kpplab(&["sweep", "--config", &cfg, "--axis", "tumor.events.0.beta=0.3,0.5,0.7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 4, "{stdout}");

    let o = kpplab(&["sweep", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);

    let o = kpplab(&["sweep", "--config", &cfg, "--axis", "solver.h=0.2,abc"]);
    assert_eq!(o.status.code(), Some(2));
}
