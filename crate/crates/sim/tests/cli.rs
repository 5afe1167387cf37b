use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn sim(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsiib-sim")).args(args).output().expect("binary runs")
}

fn run(cfg: &Path, out: &Path) -> Output {
    sim(&["--config".as_ref(), cfg.as_os_str(), "--output".as_ref(), out.as_os_str()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.toml");
    fs::write(&p, text).unwrap();
    p
}

const LADDER: &str = r#"
[experiment]
kind = "blockade"

[ladder]
n_atoms = 1225
omega1 = 1e-3
omega2 = 100
delta = 1000
two_photon = "resonant"
truncation = 2

[simulation]
duration = 400
sample_step = 10
"#;

#[test]
fn blockade_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&config("blockade.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("pi_time=47.6us "), "{line}");
    assert!(line.contains("max_P_C2="));

    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,A,G1,C1,G11,C2,G12"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 721);
    for r in &rows {
        assert!((r[1..].iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    assert!((rows[720][0] - 3600.0 / (2.0 * std::f64::consts::PI * 6e6)).abs() < 1e-18);

    let r = report(dir.path());
    assert_eq!(r["derived"]["delta"], 1000.0);
    let d = r["derived"]["two_photon_detuning"].as_f64().unwrap();
    assert!((d - 2.4969).abs() < 1e-3, "{d}");
    let pi = r["results"]["pi_time"]["seconds"].as_f64().unwrap();
    assert!((pi / 47.6e-6 - 1.0).abs() < 0.05);
    assert!(!dir.path().join("sweep.csv").exists());
}

#[test]
fn cnot_bell_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&config("cnot.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(dir.path());
    assert!(r["fidelity"].as_f64().unwrap() >= 1.0 - 1e-12);
    assert!((r["coincidence"]["p_coincidence"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let amp = r["final_state"]["A,0,C1"].as_array().unwrap();
    assert_eq!(amp.len(), 2);
    assert!((amp[0].as_f64().unwrap().hypot(amp[1].as_f64().unwrap()) - 0.5f64.sqrt()).abs() < 1e-12);
    let steps = r["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 9);
    assert_eq!(steps[0]["name"], "1a E-I");
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn interlink_with_ancilla() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&config("interlink.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(dir.path());
    assert!(r["fidelity"].as_f64().unwrap() >= 1.0 - 1e-12);
    assert!((r["entropy_ancilla_bits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn cavity_figures_of_merit() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&config("cavity-anchor.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f = &report(dir.path())["figures"];
    let rel = |k: &str, v: f64| (f[k].as_f64().unwrap() / v - 1.0).abs();
    assert_eq!(f["g"], 54.25);
    assert!(rel("finesse", 2.6e6) < 0.02);
    assert!(rel("fsr_hz", 3.747e12) < 1e-3);
    assert!(rel("gamma_hwhm", 0.12) < 0.05);
    assert!(rel("lifetime_s", 222e-9) < 0.05);

    let o = run(&config("cavity-long.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(dir.path());
    assert_eq!(r["feasibility"]["feasible"], true);
}

#[test]
fn outputs_are_byte_identical() {
    for name in ["sweep-length.toml", "cnot.toml", "ladder-spectrum.toml"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert_eq!(run(&config(name), a.path()).status.code(), Some(0));
        assert_eq!(run(&config(name), b.path()).status.code(), Some(0));
        let mut files: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        files.sort();
        assert!(!files.is_empty());
        for f in files {
            assert_eq!(fs::read(a.path().join(&f)).unwrap(), fs::read(b.path().join(&f)).unwrap(), "{name}: {f:?}");
        }
    }
}

#[test]
fn sweep_rows_follow_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&config("sweep-length.toml"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lengths: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(lengths.len(), 25);
    assert!(lengths.windows(2).all(|w| w[1] > w[0]));
    assert!((lengths[0] - 40e-6).abs() < 1e-18 && (lengths[24] - 0.05).abs() < 1e-15);
}

#[test]
fn unknown_key_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &LADDER.replace("omega2 = 100", "omega2 = 100\nomega3 = 5"));
    let o = run(&cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ladder.omega3"), "{}", stderr(&o));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn every_config_problem_is_listed() {
    let dir = tempfile::tempdir().unwrap();
    let text = LADDER.replace("truncation = 2", "truncation = 3").replace("n_atoms = 1225", "n_atoms = 2")
        .replace("sample_step = 10", "sample_step = -1");
    let o = run(&write_config(dir.path(), &text), dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for key in ["ladder.truncation", "ladder.n_atoms", "simulation.sample_step"] {
        assert!(err.contains(key), "{key} missing from {err}");
    }
}

#[test]
fn unreadable_config_and_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&dir.path().join("absent.toml"), dir.path()).status.code(), Some(2));
    assert_eq!(sim(&["--frobnicate".as_ref()]).status.code(), Some(2));
    assert_eq!(sim(&[]).status.code(), Some(2));
    assert_eq!(sim(&["--help".as_ref()]).status.code(), Some(0));
}

#[test]
fn physics_precondition_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // δ = (δ₁ + δ₂)/2 = 0 leaves the light shifts undefined
    let text = LADDER.replace("delta = 1000\ntwo_photon = \"resonant\"", "delta1 = 500\ndelta2 = -500");
    let o = run(&write_config(dir.path(), &text), dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("common detuning"));
}

#[test]
fn unwritable_output_is_an_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), LADDER);
    assert_eq!(run(&cfg, &blocker.join("out")).status.code(), Some(4));
}

#[test]
fn quiet_and_configured_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{LADDER}\n[output]\ndirectory = \"results\"\nreport = \"r.json\"\n"));
    let o = sim(&["--config".as_ref(), cfg.as_os_str(), "--quiet".as_ref()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert!(dir.path().join("results/r.json").exists());
    assert!(dir.path().join("results/trajectory.csv").exists());
}
